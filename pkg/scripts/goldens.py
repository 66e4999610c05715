"""Print the worked-example goldens from the library API and the CLI."""

import subprocess
import sys
from pathlib import Path

from posskit.fomodel import fo_eval
from posskit.modal import eval_formula, is_valid
from posskit.samples import inquisitive_model, sea_battle_frame, sea_battle_model
from posskit.syntax import parse

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
from oracles import frege  # noqa: E402


def main():
    M = sea_battle_model()
    x = M.poset.index("present")
    for f in ["<>f s", "~<>f s", "<>f s | ~<>f s"]:
        print(f"sea battle, present, {f}: {eval_formula(M, x, parse(f))}")
    v = is_valid(sea_battle_frame(), parse("[]f p -> p"))
    print(f"sea battle, []f p -> p: valid={v.valid} first countermodel "
          f"{dict(v.valuation)} at {sea_battle_frame().poset.names[v.point]}")

    I = inquisitive_model()
    for point, f in [("x", "(p | q) | r"), ("x", "(p | q) ?? r"), ("y", "(p | q) ?? r")]:
        print(f"inquisitive, {point}, {f}: {eval_formula(I, I.poset.index(point), parse(f))}")

    F = frege()
    for point, f in [("s", "cm = ce"), ("s", "~(cm = ce)"), ("s0", "cm = ce")]:
        print(f"frege, {point}, {f}: {fo_eval(F, F.poset.index(point), {}, F.parse(f))}")

    print("cli:")
    data = ROOT / "data"
    runs = [["eval", data / "sea_battle.txt", "-x", "present", "-f", "<>f s"],
            ["eval", data / "inquisitive.txt", "-x", "x", "-f", "(p|q) ?? r", "--verbose"],
            ["valid", data / "sea_battle.txt", "-f", "[]f p -> p"]]
    for argv in runs:
        out = subprocess.run([sys.executable, "-m", "posskit.cli", *map(str, argv)],
                             capture_output=True, text=True)
        print(f"  posskit {' '.join(map(str, argv[:1] + [Path(argv[1]).name] + argv[2:]))}"
              f" -> exit {out.returncode}: {(out.stdout or out.stderr).strip().replace(chr(10), '; ')}")


if __name__ == "__main__":
    main()
