#!/usr/bin/env python3
"""Regenerates include/ccc/defaults.hpp from the JSON files under data/."""
import json
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent
out = ["#pragma once", "", "// Generated by tools/gen_defaults.py from data/*.json. Do not edit.", "",
       "namespace ccc::defaults {", ""]
for name, var in [("vocabulary.json", "kVocabularyJson"), ("lexicon.json", "kLexiconJson")]:
    doc = json.loads((root / "data" / name).read_text())
    text = json.dumps(doc, separators=(",", ":"), ensure_ascii=True)
    out.append(f'inline constexpr const char* {var} = R"json({text})json";')
    out.append("")
out.append("}  // namespace ccc::defaults")
(root / "include" / "ccc" / "defaults.hpp").write_text("\n".join(out) + "\n")
