"""Write the demo arc documents used in the README examples."""
import argparse
import json
import math
import os


def parabola():
    return {"kind": "graph", "g_coeffs": ["0", "0", "0.5"], "degree_cap": 24}


def cubic():
    return {"kind": "graph",
            "g_coeffs": ["0", "0", "0", "0.16666666666666666"],
            "degree_cap": 24}


def circle(cap=40):
    # polynomial truncation of (cos s, sin s); the CLI also accepts the
    # literal arc name "circle" for the exact trigonometric version
    x = ["0"] * (cap + 1)
    y = ["0"] * (cap + 1)
    for k in range(0, cap + 1, 2):
        x[k] = repr((-1.0) ** (k // 2) / math.factorial(k))
    for k in range(1, cap + 1, 2):
        y[k] = repr((-1.0) ** ((k - 1) // 2) / math.factorial(k))
    return {"kind": "parametric", "x_coeffs": x, "y_coeffs": y,
            "closed": False, "domain": ["-1.0", "1.0"]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="demo_arcs")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    for name, doc in (("parabola", parabola()), ("cubic", cubic()),
                      ("circle_taylor", circle())):
        path = os.path.join(args.out_dir, f"{name}.json")
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
        print(path)


if __name__ == "__main__":
    main()
