"""Analyze every built-in example under every strategy and print a summary table."""

from nonrigid.catalog import CATALOG
from nonrigid.pipeline import STRATEGIES, DerivationSpec, Options, report_to_dict, run_pipeline, verify_report


def main():
    print(f"{'example':<20}{'strategy':<12}{'status':<16}branches")
    for name, doc in CATALOG.items():
        spec = DerivationSpec.from_dict(doc)
        for strategy in STRATEGIES:
            report = run_pipeline(spec, Options(strategy=strategy))
            out = report_to_dict(report)
            ok = all(passed for _, passed in verify_report(out))
            kinds = ",".join(f"{c['provenance']}:{c['branch']['kind']}" for c in out["certificates"]) or "-"
            print(f"{name:<20}{strategy:<12}{report.status.value:<16}{kinds}{'' if ok else '  VERIFY FAILED'}")


if __name__ == "__main__":
    main()
