#!/usr/bin/env python3
"""Plan the bundled soda domains and dump trees, logs and DOT renderings.

Usage: python scripts/run_soda.py [--out-dir OUT]
"""

import argparse
from pathlib import Path

from bbt import (
    ground,
    parse_domain,
    plan_request_from_domain,
    refine_tree,
    save_tree,
    simulate,
    to_dot,
)

REPO = Path(__file__).resolve().parent.parent


def run(domain_path: Path, out_dir: Path) -> None:
    name = domain_path.stem
    domain = ground(parse_domain(domain_path.read_text(encoding="utf-8")))
    result = refine_tree(plan_request_from_domain(domain))
    print(f"== {name} ==")
    for line in result.log_lines():
        print(line)
    replay = simulate(result.tree, domain.initial_belief())
    print(f"achieved {result.achieved:.6f} (replay {replay.terminal.success_probability():.6f}, "
          f"{replay.ticks_used} root ticks)")
    save_tree(result.tree, out_dir / f"{name}.tree.json")
    (out_dir / f"{name}.dot").write_text(to_dot(result.tree), encoding="utf-8")
    print(f"wrote {out_dir / f'{name}.tree.json'} and {out_dir / f'{name}.dot'}\n")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=REPO / "out")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for domain_file in ("soda_deterministic.bbt", "soda.bbt"):
        run(REPO / "domains" / domain_file, args.out_dir)


if __name__ == "__main__":
    main()
