#!/usr/bin/env python3
"""Regenerates crates/core/data/demo_kb.json.

Vocabulary is authored as raw English words grouped by assessment bucket.
Lemmas come from the engine's own stemmer via `cargo run --example stem`.
"""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


_lemmas = {}


def prime_stems(words):
    words = sorted(set(words) - _lemmas.keys())
    out = subprocess.run(
        ["cargo", "run", "-q", "-p", "goalspot-core", "--example", "stem"],
        input="".join(w + "\n" for w in words), capture_output=True, text=True, check=True, cwd=ROOT,
    )
    _lemmas.update(zip(words, out.stdout.split("\n")))


def stem(word):
    if word not in _lemmas:
        prime_stems([word])
    return _lemmas[word]


FUNCTION_WORDS = {"a", "an", "the", "this", "that", "my", "your", "our", "its", "under", "on", "in"}

METONYMS = {
    "deletion": ["delete", "erase", "remove", "get rid of", "eliminate", "wipe", "clear"],
    "creation": ["create", "make", "build", "generate", "produce"],
    "modification": ["change", "modify", "alter", "adjust", "edit", "customize", "tweak"],
    "insertion": ["insert", "add", "put"],
    "display": ["show", "display", "reveal", "visible", "see", "appear"],
    "concealment": ["hide", "conceal", "invisible", "disappear"],
}

# Links whose probability depends on usage. Values are buckets.
SPLIT = {
    ("print-sheet", "print"): {"pNounIndef": 9, "pNounDef": 10, "pVerb": 12},
    ("page-setup", "print"): {"pNounIndef": 8, "pNounDef": 10, "pVerb": 7},
    ("print-quality", "print"): {"pNounIndef": 9, "pNounDef": 12, "pVerb": 6},
    ("print-area", "print"): {"pNounIndef": 7, "pNounDef": 8, "pVerb": 10},
    ("create-chart", "chart"): {"pIndef": 12, "pDef": 7},
    ("format-chart", "chart"): {"pIndef": 6, "pDef": 12},
    ("chart-type", "chart"): {"pIndef": 7, "pDef": 11},
    ("page-break", "page break"): {"pIndef": 12, "pDef": 10},
    ("pivot-table", "table"): {"pIndef": 9, "pDef": 7},
    ("vlookup", "table"): {"pIndef": 6, "pDef": 10},
}

ZERO_DERIVATION = {"print"}
EXACT_CASE = {"Word", "Excel", "Office", "VBA", "CSV", "PDF"}

# id, title, relative prior, {bucket: words}; "@name" is a metonym.
GOALS = [
    ("print-sheet", "Print a worksheet", 3, {
        12: "print",
        11: "printer printout",
        9: "copies hardcopy paper",
        8: "duplex double-sided collate tray spool",
        6: "@creation output sheet PDF",
    }),
    ("print-quality", "Improve print quality", 1, {
        12: "print",
        10: "darker lighter faint ink toner",
        9: "quality blurry smudged",
        8: "grayscale monochrome resolution dpi",
        6: "@modification colour",
    }),
    ("print-area", "Set the print area", 1, {
        12: "print area",
        10: "print",
        9: "portion part",
        8: "selection region subset exclude",
        6: "@deletion range",
    }),
    ("page-setup", "Change page setup and margins", 2, {
        11: "margin page setup",
        10: "orientation landscape portrait",
        9: "scaling letter legal a4",
        8: "@modification page fit centre",
        6: "print wide",
    }),
    ("page-break", "Insert or remove page breaks", 1, {
        12: "page break",
        10: "pagination",
        9: "page @insertion",
        8: "@deletion split force",
        6: "next",
    }),
    ("header-footer", "Add headers and footers", 1, {
        11: "header footer",
        10: "page number",
        9: "@insertion bottom",
        8: "logo filename numbering",
        7: "page date top",
    }),
    ("create-chart", "Create a chart", 2, {
        12: "chart",
        11: "@creation",
        10: "graph plot",
        9: "wizard visualize diagram",
        8: "pie bar scatter",
        6: "@insertion data",
    }),
    ("format-chart", "Change chart formatting", 1, {
        12: "chart",
        11: "@modification",
        10: "legend axis gridlines",
        9: "label series",
        8: "colour style title",
        7: "graph",
    }),
    ("chart-type", "Change the chart type", 1, {
        11: "chart",
        10: "type",
        9: "pie bar line scatter doughnut",
        8: "@modification switch convert",
        7: "graph area",
    }),
    ("delete-rows", "Delete rows or columns", 2, {
        12: "@deletion",
        10: "row column",
        9: "blank empty entire",
        7: "cell shift",
    }),
    ("insert-rows", "Insert rows or columns", 2, {
        12: "@insertion",
        10: "row column",
        9: "between above below",
        7: "new cell shift",
    }),
    ("hide-rows", "Hide and unhide rows or columns", 1, {
        12: "@concealment",
        11: "unhide hidden",
        10: "@display",
        9: "row column",
        8: "collapse outline",
    }),
    ("column-width", "Adjust column width and row height", 2, {
        11: "width height",
        10: "autofit resize",
        9: "wide narrow tall column",
        8: "@modification row fit",
        7: "truncated ####",
    }),
    ("freeze-panes", "Freeze panes to keep headings visible", 1, {
        12: "freeze unfreeze",
        11: "pane",
        10: "scroll scrolling",
        9: "heading headings",
        8: "@display top row stay",
    }),
    ("sort-data", "Sort data", 2, {
        12: "sort",
        10: "ascending descending alphabetical alphabetically",
        9: "order arrange reorder",
        8: "largest smallest",
        7: "column list data",
    }),
    ("filter-data", "Filter a list", 2, {
        12: "filter autofilter",
        10: "criteria",
        9: "@display matching",
        8: "subset list",
        7: "@concealment data",
    }),
    ("sum-numbers", "Add up numbers with SUM", 3, {
        12: "sum autosum",
        11: "total",
        10: "subtotal addition",
        9: "@insertion numbers",
        7: "column figures",
    }),
    ("statistics", "Calculate averages and statistics", 2, {
        12: "average",
        10: "mean median mode",
        9: "count deviation variance statistics",
        8: "maximum minimum max min",
        7: "numbers calculate",
    }),
    ("formula-errors", "Fix formula errors", 2, {
        12: "error errors",
        10: "#VALUE #REF #DIV #NAME",
        9: "wrong broken fix debug",
        8: "formula circular trace",
        7: "reference",
    }),
    ("write-formula", "Enter a formula", 3, {
        12: "formula formulas",
        10: "calculate calculation equation",
        9: "multiply divide subtract compute",
        8: "function operator equals",
        7: "@creation numbers",
    }),
    ("cell-references", "Use absolute and relative references", 1, {
        12: "absolute relative",
        11: "reference references",
        10: "dollar anchor",
        9: "fixed mixed",
        8: "formula copy",
    }),
    ("vlookup", "Look up values in a table", 2, {
        12: "vlookup hlookup xlookup lookup",
        10: "table",
        9: "match index",
        8: "retrieve corresponding value",
        7: "find",
    }),
    ("conditional-format", "Highlight cells with conditional formatting", 2, {
        12: "conditional formatting",
        11: "highlight",
        10: "data bars icon sets",
        9: "rule threshold",
        8: "colour shade red",
        7: "duplicate",
    }),
    ("number-format", "Format numbers, currency and percentages", 3, {
        12: "currency percentage percent",
        11: "decimal decimals",
        10: "number format comma thousands",
        9: "dollar euro accounting",
        8: "negative parentheses digits",
        7: "@modification numbers",
    }),
    ("date-time", "Work with dates and times", 2, {
        12: "date dates",
        11: "time",
        10: "day month year weekday",
        9: "calendar today hour minute",
        8: "timestamp duration",
    }),
    ("cell-format", "Change fonts, colours and borders", 3, {
        12: "font",
        11: "bold italic underline",
        10: "border borders fill",
        9: "colour background shading",
        8: "@modification typeface",
        7: "cell red",
    }),
    ("wrap-text", "Wrap and align text in cells", 2, {
        12: "wrap",
        11: "align alignment",
        10: "indent justify vertical",
        9: "rotate angle overflow",
        8: "line break text",
        7: "cell",
    }),
    ("copy-paste", "Copy, cut and paste cells", 3, {
        12: "copy paste",
        11: "cut clipboard",
        10: "paste special transpose",
        9: "move",
        8: "values duplicate",
        7: "cell",
    }),
    ("fill-series", "Fill a series automatically", 1, {
        12: "autofill fill handle",
        11: "fill",
        10: "series sequence",
        9: "increment consecutive pattern",
        8: "drag extend",
    }),
    ("find-replace", "Find and replace text", 2, {
        12: "replace",
        11: "find",
        10: "search locate",
        9: "substitute occurrence occurrences",
        8: "wildcard word",
        7: "text",
    }),
    ("spell-check", "Check spelling", 1, {
        12: "spelling spell",
        11: "typo misspelled",
        10: "dictionary proofread",
        9: "grammar autocorrect thesaurus",
        8: "check word",
    }),
    ("save-file", "Save a workbook", 3, {
        12: "save",
        11: "saving",
        10: "autosave backup",
        9: "disk folder",
        8: "file workbook",
        7: "format PDF",
    }),
    ("open-file", "Open and import files", 2, {
        12: "open import",
        11: "CSV",
        10: "load delimiter delimited",
        9: "txt external",
        8: "file text",
    }),
    ("protect-sheet", "Protect a sheet with a password", 2, {
        12: "protect protection password",
        11: "lock unlock locked",
        10: "secure encrypt",
        9: "permission readonly",
        7: "sheet workbook",
    }),
    ("comments", "Add comments and notes to cells", 2, {
        12: "comment comments",
        11: "note notes",
        10: "annotate annotation",
        9: "remark reply popup",
        8: "@insertion cell",
    }),
    ("macros", "Record and run macros", 1, {
        12: "macro macros",
        11: "VBA automate",
        10: "record recorder script",
        9: "code module button",
        8: "repeat run",
    }),
    ("pivot-table", "Summarize data with a pivot table", 2, {
        12: "pivot pivottable",
        11: "summarize summary",
        10: "table",
        9: "crosstab aggregate slicer",
        8: "field report data",
    }),
    ("worksheet-tabs", "Add, rename and move worksheets", 2, {
        12: "worksheet worksheets",
        11: "rename tab tabs",
        10: "sheet sheets",
        9: "@insertion move",
        7: "workbook",
    }),
    ("undo", "Undo and redo changes", 2, {
        12: "undo redo",
        11: "mistake accidentally",
        10: "revert oops",
        9: "reverse previous",
        8: "changes back",
    }),
    ("word-integration", "Copy a worksheet into Word", 1, {
        12: "Word",
        11: "embed",
        10: "document Office",
        9: "mail merge letter",
        8: "paste report",
    }),
    ("text-functions", "Split and combine text", 2, {
        12: "concatenate concat",
        11: "text to columns",
        10: "substring uppercase lowercase",
        9: "trim characters",
        8: "split combine text",
        7: "left right mid",
    }),
    ("remove-duplicates", "Remove duplicate entries", 1, {
        12: "duplicate duplicates",
        11: "dupes unique distinct",
        10: "@deletion",
        9: "repeated twice",
        8: "entries list",
    }),
]

# Weaker evidence: words users reach for around each task.
EXTRA = {
    "print-sheet": "printing printed printable physical printers networked spooler jam queue orientation",
    "print-quality": "pale washed streaks cartridge contrast sharp crisp dim legible readable",
    "print-area": "area portion sections specific selected boundaries cropped",
    "page-setup": "margins gutter inches centimetres scale shrink enlarge sheets tabloid envelope",
    "page-break": "pages breaks preview dashed boundary divider separate",
    "header-footer": "headers footers running confidential watermark stamp corner",
    "create-chart": "graphs charts visualization visualisation trend histogram sparkline infographic",
    "format-chart": "axes tick ticks colours colors gridline labels titles markers",
    "chart-type": "types kind radar bubble stacked combo",
    "delete-rows": "rows columns blanks gaps unwanted",
    "insert-rows": "extra additional space gap room",
    "hide-rows": "unhiding hiding grouped ungroup expand",
    "column-width": "widths heights narrower wider squashed cramped spacing",
    "freeze-panes": "frozen panes scrolled labels stationary sticky",
    "sort-data": "sorting sorted rank ranking oldest newest highest lowest",
    "filter-data": "filtering filtered filters criterion narrow showing",
    "sum-numbers": "sums totals summing tally adding plus grand",
    "statistics": "averages stdev percentile quartile mean average spread",
    "formula-errors": "error messages problem problems fault incorrect mistake warning",
    "write-formula": "arithmetic math maths sums product quotient division minus times",
    "cell-references": "anchored lock locking relative absolutely pinned",
    "vlookup": "lookups lookup tables matches matching fetch pull search",
    "conditional-format": "highlighted highlighting automatically colourful coloured traffic heatmap",
    "number-format": "percentages currencies pounds yen symbol formatting",
    "date-time": "times days months years weekdays clock elapsed ago",
    "cell-format": "fonts colours colors borders fills outline strikethrough superscript",
    "wrap-text": "wrapping wrapped centred centered aligned middle justified",
    "copy-paste": "copying pasting copied pasted moving",
    "fill-series": "filled auto numbering increments continue dragging",
    "find-replace": "finding replacing searching",
    "spell-check": "spelled misspelling misspellings spellcheck typos",
    "save-file": "saved saves location xlsx compatible",
    "open-file": "opening imported importing comma-separated tab-delimited",
    "protect-sheet": "protected unprotect passwords secured editing prevent",
    "comments": "commented commenting notes feedback discuss",
    "macros": "automation automated recorded recording vb programming",
    "pivot-table": "pivoting pivots breakdown cross-tab summarise",
    "worksheet-tabs": "renaming renamed tabbed",
    "undo": "undone undoing redoing oops accidental",
    "word-integration": "documents letters memo embedded linked",
    "text-functions": "joining joined splitting separate strings firstname surname",
    "remove-duplicates": "duplicated duplicate repeats repeating dedupe",
}

# Rare but telling words, assessed at the bottom of the useful range.
RARE = {
    "print-sheet": "hardcopies photocopy fax plotter inkjet laser",
    "print-quality": "faded speckled pixelated draft",
    "print-area": "printable-area cutoff clipped",
    "page-setup": "a3 a5 booklet",
    "page-break": "overflowing spill",
    "header-footer": "letterhead copyright",
    "create-chart": "dashboard infographics pictograph",
    "format-chart": "fonts legends annotations callout",
    "chart-type": "waterfall funnel treemap sunburst gantt",
    "delete-rows": "purge strip",
    "insert-rows": "interleave spacer",
    "hide-rows": "secret private",
    "column-width": "squished squeezed cramped crammed",
    "freeze-panes": "split-screen splitting",
    "sort-data": "alphabetize alphabetise chronological numeric numerical",
    "filter-data": "slice exclude excluding",
    "sum-numbers": "summation cumulative running",
    "statistics": "correlation regression standard",
    "formula-errors": "bug glitch troubleshoot diagnose",
    "write-formula": "exponent power square root",
    "cell-references": "shifting sliding",
    "vlookup": "cross-reference mapping",
    "conditional-format": "flagging flagged overdue",
    "number-format": "scientific notation fraction fractions",
    "date-time": "birthday anniversary deadline schedule",
    "cell-format": "cosmetic appearance pretty",
    "wrap-text": "multiline paragraph",
    "copy-paste": "replicate clone",
    "fill-series": "weekdays incrementing auto-number",
    "find-replace": "rename globally",
    "spell-check": "spellchecker correction",
    "save-file": "overwrite overwriting",
    "open-file": "quotes ascii unicode encoding",
    "protect-sheet": "intruder confidentiality tamper",
    "comments": "sticky tooltip",
    "macros": "subroutine keystrokes",
    "pivot-table": "olap rollup",
    "worksheet-tabs": "colour-coded",
    "undo": "ctrl+z",
    "word-integration": "memo proposal",
    "text-functions": "extract initials prefix suffix",
    "remove-duplicates": "deduplicate redundant",
}

# Everyday words that point at several tasks at once.
SHARED = {
    "keyboard": {"undo": 5, "copy-paste": 5},
    "shortcut": {"undo": 6, "copy-paste": 6, "fill-series": 5},
    "right-click": {"copy-paste": 5, "insert-rows": 5, "hide-rows": 5},
    "mouse": {"fill-series": 5, "column-width": 5},
    "template": {"create-chart": 4, "cell-format": 5, "save-file": 6},
    "theme": {"cell-format": 7, "format-chart": 6},
    "layout": {"page-setup": 8, "format-chart": 5},
    "invoice": {"number-format": 5, "sum-numbers": 5},
    "budget": {"sum-numbers": 6, "statistics": 5},
    "salary": {"statistics": 5, "sort-data": 4},
    "sales": {"pivot-table": 6, "create-chart": 5, "sum-numbers": 5},
    "employee": {"sort-data": 5, "vlookup": 5},
    "customer": {"vlookup": 5, "remove-duplicates": 5},
    "inventory": {"vlookup": 5, "sum-numbers": 5},
    "grade": {"statistics": 6, "conditional-format": 5},
    "score": {"statistics": 6, "sort-data": 5},
    "phone": {"text-functions": 5, "number-format": 6},
    "zip": {"number-format": 5, "text-functions": 5},
    "leading": {"number-format": 7},
    "zeros": {"number-format": 7},
    "address": {"text-functions": 6},
    "names": {"sort-data": 6, "text-functions": 6},
    "column header": {"freeze-panes": 7, "sort-data": 5, "filter-data": 5},
    "first row": {"freeze-panes": 8},
    "grid": {"cell-format": 5, "format-chart": 4},
    "spreadsheets": {"open-file": 5, "save-file": 5},
    "quarterly": {"pivot-table": 5, "create-chart": 5},
    "monthly": {"date-time": 6, "pivot-table": 5},
    "weekly": {"date-time": 6},
    "expenses": {"sum-numbers": 6},
    "receipt": {"sum-numbers": 4},
    "percentile": {"statistics": 7},
    "visual": {"create-chart": 5, "conditional-format": 5},
}

GENERAL = {
    # weak, broad links for very common domain nouns
    "spreadsheet": 5,
    "cell": 5,
    "data": 5,
}


def bucket_prob(b, p_max=0.9, ratio=1.8):
    return p_max * ratio ** (b - 13)


class Builder:
    def __init__(self):
        self.nodes = {}  # id -> node dict
        self.surface_owner = {}  # surface key -> node id
        self.links = {}

    def surface_key(self, tokens, exact):
        return ("E" if exact else "L",) + tuple(tokens)

    def node_for_word(self, raw):
        if raw.startswith("@"):
            return raw[1:]
        exact = raw in EXACT_CASE
        if exact:
            tokens = [raw]
        else:
            low = raw.lower()
            tokens = [stem(t) for t in tokenize(low)]
        key = self.surface_key(tokens, exact)
        if key in self.surface_owner:
            return self.surface_owner[key]
        if len(tokens) > 1:
            kind = "phrase"
            node_id = "-".join(tokenize(raw.lower()))
        else:
            kind = "term"
            node_id = raw if exact else tokenize(raw.lower())[0]
        for t in tokens:
            if t in FUNCTION_WORDS:
                sys.exit(f"function word in surface {raw!r}")
        if node_id in self.nodes:
            node_id = node_id + "-" + kind
        node = {"id": node_id, "kind": kind, "surfaces": [surface_doc(tokens, exact)]}
        if exact:
            node["caseSensitive"] = True
        if raw in ZERO_DERIVATION:
            node["zeroDerivation"] = True
        self.nodes[node_id] = node
        self.surface_owner[key] = node_id
        self.raw_ids[raw] = node_id
        return node_id

    def add_metonyms(self):
        for name, words in METONYMS.items():
            surfaces = []
            for w in words:
                tokens = [stem(t) for t in tokenize(w)]
                key = self.surface_key(tokens, False)
                if key in self.surface_owner:
                    sys.exit(f"metonym surface {w!r} already used")
                self.surface_owner[key] = name
                surfaces.append(surface_doc(tokens, False))
            self.nodes[name] = {"id": name, "kind": "metonym", "surfaces": surfaces}

    def link(self, goal, node, bucket):
        key = (goal, node)
        if key in self.links:
            return
        self.links[key] = bucket


def tokenize(text):
    out, cur = [], []
    for ch in text:
        if ch.isalnum() or ch == "'":
            cur.append(ch)
        elif cur:
            out.append("".join(cur).strip("'"))
            cur = []
    if cur:
        out.append("".join(cur).strip("'"))
    return [t for t in out if t]


def surface_doc(tokens, exact):
    doc = {"tokens": tokens}
    if exact:
        doc["exactCase"] = True
    return doc


def parse_group(text):
    """Splits a bucket group into entries; phrases are joined by spaces
    and listed in PHRASES."""
    words = text.split()
    out, i = [], 0
    while i < len(words):
        for n in (3, 2):
            cand = " ".join(words[i:i + n])
            if cand in PHRASES:
                out.append(cand)
                i += n
                break
        else:
            out.append(words[i])
            i += 1
    return out


PHRASES = {
    "print area", "page setup", "page break", "page number", "line break", "paste special", "fill handle",
    "conditional formatting", "data bars", "icon sets", "number format", "mail merge", "text to columns",
    "named range",
}


def all_words():
    texts = [w for ws in METONYMS.values() for w in ws]
    texts += [t for *_, groups in GOALS for t in groups.values()]
    texts += list(EXTRA.values()) + list(RARE.values()) + list(SHARED) + list(GENERAL)
    return [t for text in texts for t in tokenize(text.lower())]


def build():
    prime_stems(all_words())
    b = Builder()
    b.raw_ids = {}
    b.add_metonyms()
    goal_docs = []
    for gid, title, prior, groups in GOALS:
        goal_docs.append({"id": gid, "title": title, "prior": prior})
        for bucket, text in groups.items():
            for raw in parse_group(text):
                if tokenize(raw) == [] and not raw.startswith("@"):
                    continue
                b.link(gid, b.node_for_word(raw), bucket)
    for gid, text in EXTRA.items():
        for raw in parse_group(text):
            b.link(gid, b.node_for_word(raw), 6)
    for gid, text in RARE.items():
        for raw in parse_group(text):
            b.link(gid, b.node_for_word(raw), 4)
    for raw, goals in SHARED.items():
        for gid, bucket in goals.items():
            b.link(gid, b.node_for_word(raw), bucket)
    for raw, bucket in GENERAL.items():
        node = b.node_for_word(raw)
        for gid, *_ in GOALS:
            b.link(gid, node, bucket)

    links = []
    for (gid, node), bucket in b.links.items():
        split = SPLIT.get((gid, b.nodes[node]["id"])) or SPLIT.get((gid, raw_of(b, node)))
        doc = {"goal": gid, "node": node}
        if split:
            for k, v in split.items():
                doc[k] = {"bucket": v}
        else:
            doc["bucket"] = bucket
        links.append(doc)
    missing = [k for k in SPLIT if not any(l["goal"] == k[0] and l["node"] == b.raw_ids.get(k[1], k[1]) for l in links)]
    if missing:
        sys.exit(f"split links without base link: {missing}")

    return {
        "meta": {"name": "spreadsheet-help", "version": "1.0", "language": "en"},
        "scale": {"pMax": 0.9, "pMin": bucket_prob(1)},
        "leak": 1e-4,
        "nounVerbPrior": 0.5,
        "goals": goal_docs,
        "nodes": list(b.nodes.values()),
        "links": links,
    }


def raw_of(b, node):
    for raw, nid in b.raw_ids.items():
        if nid == node:
            return raw
    return node


if __name__ == "__main__":
    kb = build()
    out = ROOT / "crates/core/data/demo_kb.json"
    out.write_text(json.dumps(kb, indent=2, ensure_ascii=False) + "\n")
    print(f"{len(kb['goals'])} goals, {len(kb['nodes'])} nodes, {len(kb['links'])} links", file=sys.stderr)
