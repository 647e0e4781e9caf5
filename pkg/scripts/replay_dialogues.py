"""Grade every sample submission stage against its assignment and print the feedback."""
import argparse
from pathlib import Path

from automata_grader.grade import grade_submission, parse_assignment

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=Path, default=SAMPLES)
    args = parser.parse_args()
    for kind_dir in sorted(p for p in args.samples.iterdir() if p.is_dir()):
        assignment = parse_assignment((kind_dir / "assignment.lisp").read_text())
        for stage in sorted(kind_dir.glob("stage*.lisp")):
            report = grade_submission(assignment, stage.read_text())
            score = f"{float(report.overall_score):g}/{float(report.max_score):g}"
            print(f"{kind_dir.name}/{stage.name}: {score}")
            for line in report.summary.splitlines():
                print(f"    {line}")


if __name__ == "__main__":
    main()
