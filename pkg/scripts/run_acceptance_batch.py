"""Run the acceptance batch, write one JSON report per config, and print the audit table."""

import argparse
import hashlib
import json
from pathlib import Path

from fqtrees.cli import theorem_audit, run_batch, write_atomic
from fqtrees.experiments import acceptance_batch


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports", help="output directory")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    configs = acceptance_batch()
    texts = run_batch(configs, args.workers)
    digest = hashlib.sha256()
    for i, (cfg, text) in enumerate(zip(configs, texts)):
        write_atomic(out / f"{i:03d}_{cfg.command}.json", text)
        digest.update(text.encode())
    rows = theorem_audit(json.loads(t) for t in texts)
    failed = 0
    for row in rows:
        failed += row["fail"]
        print(f"{row['theorem']:<28} pass={row['pass']:<3} vacuous={row['vacuous']:<3} fail={row['fail']}"
              + (f"  ({'; '.join(row['notes'])})" if row["notes"] else ""))
    print(f"{len(texts)} reports, sha256 {digest.hexdigest()[:16]}")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
