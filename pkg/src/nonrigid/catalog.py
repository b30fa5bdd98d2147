"""Built-in example derivations, as spec documents."""

CATALOG: dict[str, dict] = {
    "coordinate": {
        "constants": [],
        "variables": ["x1", "x2"],
        "images": {"x1": "1", "x2": "0"},
    },
    "weitzenboeck3": {
        "constants": [],
        "variables": ["x1", "x2", "x3"],
        "images": {"x1": "0", "x2": "x1", "x3": "x2"},
    },
    "triangular-deg2": {
        "constants": [],
        "variables": ["x1", "x2", "x3"],
        "images": {"x1": "0", "x2": "x1^2", "x3": "x2"},
    },
    "quasi-translation": {
        "constants": [],
        "variables": ["x1", "x2"],
        "images": {"x1": "(x1 - x2)^2", "x2": "(x1 - x2)^2"},
    },
    "rank1-linear": {
        "constants": [],
        "variables": ["x1", "x2"],
        "images": {"x1": "2*x1 - 4*x2", "x2": "x1 - 2*x2"},
    },
}
