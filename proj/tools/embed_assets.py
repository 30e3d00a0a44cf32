#!/usr/bin/env python3
"""Regenerate include/proeval/asset_data.hpp from assets/.

Run from the repository root after editing anything under assets/.
"""
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "include" / "proeval" / "asset_data.hpp"

PROMPTS = sorted((ROOT / "assets" / "prompts").glob("*.txt"))
FIXTURES = sorted((ROOT / "assets" / "fixtures").glob("*.json"))


def cpp_name(path: pathlib.Path) -> str:
    return path.stem


def raw_literal(text: str) -> str:
    assert ")PROEVAL_ASSET" not in text
    return 'R"PROEVAL_ASSET(' + text + ')PROEVAL_ASSET"'


def main() -> None:
    lines = [
        "// Generated by tools/embed_assets.py from assets/ -- do not edit by hand.",
        "#pragma once",
        "",
        "#include <array>",
        "#include <string_view>",
        "#include <utility>",
        "",
        "namespace proeval::asset_data {",
        "",
    ]
    for group, paths in (("prompt", PROMPTS), ("fixture", FIXTURES)):
        names = []
        for p in paths:
            name = cpp_name(p)
            names.append(name)
            lines.append(
                f"inline constexpr std::string_view {group}_{name} ="
            )
            lines.append(f"    {raw_literal(p.read_text())};")
            lines.append("")
        lines.append(
            f"inline constexpr std::array<std::pair<std::string_view, std::string_view>, {len(names)}> {group}s{{{{"
        )
        for name in names:
            lines.append(f'    {{"{name}", {group}_{name}}},')
        lines.append("}};")
        lines.append("")
    lines.append("}  // namespace proeval::asset_data")
    lines.append("")
    OUT.write_text("\n".join(lines))
    print(f"wrote {OUT} ({OUT.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
