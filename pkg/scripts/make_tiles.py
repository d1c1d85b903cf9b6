"""Write the bundled tile example (data/tiles.json) from a readable glyph map."""
import json
import pathlib

EXAMPLE = """
..................................
..nnnnn.........nnnnn......N......
.W--K--E.......W---K-E....w|e.....
..sssss...................wKe.....
..............................w|e.
...nnnnnn........N........w|e.....
..W-----+e......w|e........S......
...sssss|e......wKe...............
.......w|e......w|e......nnnn.....
.......wKe......w+-----E.W-K--E...
.......w|e.......sssss...ssss.....
........S.........................
..................................
"""

LEGEND = {
    ".": "empty",
    "n": "side_wall:n",
    "s": "side_wall:s",
    "e": "side_wall:e",
    "w": "side_wall:w",
    "W": "end_wall:w",
    "E": "end_wall:e",
    "N": "end_wall:n",
    "S": "end_wall:s",
    "-": "corridor:h",
    "|": "corridor:v",
    "+": "corridor:x",
    "K": "core",
}

if __name__ == "__main__":
    glyphs = list(LEGEND)
    rows = [[glyphs.index(ch) for ch in line] for line in EXAMPLE.strip("\n").splitlines()]
    doc = {
        "tiles": [{"id": i, "name": LEGEND[g], "glyph": g, "weight": 1.0} for i, g in enumerate(glyphs)],
        "example": rows,
    }
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "ventgen" / "data" / "tiles.json"
    out.write_text(json.dumps(doc, separators=(",", ":")) + "\n")
    print(f"wrote {out}")
