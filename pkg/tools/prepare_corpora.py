"""Build the per-language diacritized fixture corpora from translation catalogs.

The inputs are Python wheels that ship gettext catalogs (``.po`` preferred,
``.mo`` otherwise) and npm tarballs that ship JSON locale bundles
(``locales/<lang>.json``, ``translations/<lang>.json``).  Every translated
string becomes at most one line after markup and placeholder removal; lines
are deduplicated per language and keep the order package name, member path,
entry.

    python tools/prepare_corpora.py --out tests/fixtures/corpora PACKAGE...

Output: ``<lang>.txt.gz`` per language and ``SOURCES.tsv`` with the
per-package licence and line counts.  Re-running on the same packages is
byte-identical.
"""
from __future__ import annotations

import argparse
import gzip
import html
import json
import re
import sys
import tarfile
import tempfile
import unicodedata
import zipfile
from collections import Counter, defaultdict
from email.parser import HeaderParser
from pathlib import Path

import polib

LANGS = ("cs", "es", "fr", "ga", "hr", "hu", "lv", "pl", "ro", "sk", "tr", "vi")

_CATALOG = re.compile(r"/([a-z]{2,3})(?:[_@-][A-Za-z0-9]+)?/LC_MESSAGES/([^/]+)\.(po|mo)$")
_PLACEHOLDER = re.compile(
    r"%\([^)]*\)[-#0 +]*\d*(?:\.\d+)?[a-zA-Z]"  # %(name)s
    r"|%[-#0 +]*\d*(?:\.\d+)?[sdifrxXuc%]"       # %s %d %%
    r"|\{\{.*?\}\}|\{[^{}]*\}"                   # {{ x }} {0} {name}
    r"|\$\{[^}]*\}|\[\[[^\]]*\]\]"
)
_JSON_BUNDLE = re.compile(r"/(?:locales|translations|i18n)/([a-z]{2,3})(?:[-_][A-Za-z]+)?(?:\.min)?\.json$")
_TAG = re.compile(r"<[^<>]*>")
_URLISH = re.compile(r"\S*(?:https?://|www\.|@|\.com\b|\.org\b|/)\S*")
_ROMANIAN = str.maketrans("ŞşŢţ", "ȘșȚț")


def clean(text: str) -> str:
    text = _TAG.sub(" ", text)
    text = html.unescape(text)
    text = _PLACEHOLDER.sub(" ", text)
    text = _URLISH.sub(" ", text)
    text = text.replace("_", " ").replace("&", " ")
    text = unicodedata.normalize("NFC", " ".join(text.split()))
    return text


def usable(line: str) -> bool:
    words = line.split()
    if len(words) < 3:
        return False
    alpha = sum(1 for w in words if any(c.isalpha() for c in w))
    return alpha >= 3 and not any(unicodedata.category(c).startswith("C") for c in line)


def licence(zf: zipfile.ZipFile) -> str:
    meta = next(n for n in zf.namelist() if n.endswith(".dist-info/METADATA"))
    headers = HeaderParser().parsestr(zf.read(meta).decode("utf-8", "replace"))
    value = (headers.get("License-Expression") or headers.get("License") or "").strip()
    if value and "\n" not in value:
        return value
    # multi-line headers hold the whole licence text; the classifier is terser
    classifiers = [c.split("::")[-1].strip() for c in headers.get_all("Classifier", []) if c.startswith("License ::")]
    value = classifiers[0] if classifiers else "unknown"
    return value


def catalogs(zf: zipfile.ZipFile) -> list[tuple[str, str]]:
    """(language, member name), preferring .po over .mo of the same catalog."""
    found: dict[tuple[str, str], str] = {}
    for name in sorted(zf.namelist()):
        m = _CATALOG.search(name)
        if m is None or m.group(1) not in LANGS:
            continue
        key = (name[: m.start()] + m.group(0).rsplit(".", 1)[0], m.group(1))
        if m.group(3) == "po" or key not in found:
            found[key] = name
    return sorted((lang, name) for (_, lang), name in found.items())


def entries(zf: zipfile.ZipFile, member: str):
    data = zf.read(member)
    with tempfile.NamedTemporaryFile(suffix=Path(member).suffix) as tmp:
        tmp.write(data)
        tmp.flush()
        cat = polib.pofile(tmp.name) if member.endswith(".po") else polib.mofile(tmp.name)
    for entry in cat:
        if entry.obsolete or "fuzzy" in entry.flags:
            continue
        texts = [entry.msgstr] if entry.msgstr else [entry.msgstr_plural[k] for k in sorted(entry.msgstr_plural)]
        for text in texts:
            if text and text != entry.msgid:
                yield text


def json_strings(node):
    if isinstance(node, dict):
        for key in sorted(node):
            yield from json_strings(node[key])
    elif isinstance(node, list):
        for item in node:
            yield from json_strings(item)
    elif isinstance(node, str):
        yield node


def read_package(path: Path) -> tuple[str, list[tuple[str, str]]]:
    """Licence and ``(language, translated string)`` pairs of one package."""
    texts: list[tuple[str, str]] = []
    if path.suffix == ".whl":
        with zipfile.ZipFile(path) as zf:
            for lang, member in catalogs(zf):
                texts.extend((lang, t) for t in entries(zf, member))
            return licence(zf), texts
    with tarfile.open(path, "r:gz") as tf:
        members = sorted(tf.getmembers(), key=lambda m: m.name)
        meta = json.load(tf.extractfile("package/package.json"))
        for member in members:
            m = _JSON_BUNDLE.search(member.name)
            if m is None or m.group(1) not in LANGS or not member.isfile():
                continue
            data = json.load(tf.extractfile(member))
            texts.extend((m.group(1), t) for t in json_strings(data))
    return str(meta.get("license", "unknown")), texts


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("packages", nargs="+", type=Path, help="wheels (.whl) or npm tarballs (.tgz)")
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--count-only", action="store_true")
    args = ap.parse_args(argv)

    lines: dict[str, dict[str, None]] = defaultdict(dict)
    sources: list[tuple[str, str, str, int]] = []
    for package in sorted(args.packages, key=lambda p: p.name.lower()):
        lic, texts = read_package(package)
        added: Counter = Counter()
        for lang, text in texts:
            line = clean(text)
            if lang == "ro":
                line = line.translate(_ROMANIAN)
            if usable(line) and line not in lines[lang]:
                lines[lang][line] = None
                added[lang] += 1
        for lang in sorted(added):
            sources.append((package.name, lic, lang, added[lang]))

    for lang in LANGS:
        tokens = sum(len(line.split()) for line in lines[lang])
        print(f"{lang}\t{len(lines[lang])} lines\t{tokens} tokens", file=sys.stderr)
    if args.count_only:
        return 0
    args.out.mkdir(parents=True, exist_ok=True)
    for lang in LANGS:
        payload = "".join(f"{line}\n" for line in lines[lang]).encode("utf-8")
        with open(args.out / f"{lang}.txt.gz", "wb") as raw:
            # mtime=0 and no filename keep the archive byte-identical across runs.
            with gzip.GzipFile(filename="", mode="wb", fileobj=raw, mtime=0, compresslevel=9) as gz:
                gz.write(payload)
    with open(args.out / "SOURCES.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("package\tlicence\tlanguage\tlines\n")
        for row in sources:
            fh.write("\t".join(map(str, row)) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
