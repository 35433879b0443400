"""Writes epu_monthly_fixture.xlsx: a minimal workbook in the layout of the
published monthly US index (shared strings, numeric cells, a footnote row)."""
import zipfile

strings = ["Year", "Month", "Three_Component_Index", "News_Based_Policy_Uncert_Index",
           "Source: fixture &amp; test"]
rows = [
    [("s", 0), ("s", 1), ("s", 2), ("s", 3)],
    [("n", "1985"), ("n", "1"), ("n", "125.2243"), ("n", "103.8381")],
    [("n", "1985"), ("n", "2"), ("n", "99.02543"), ("n", "79.64098")],
    [("n", "1985"), ("n", "3"), ("n", "112.0884"), ("n", "96.80377")],
    [("n", "1985"), ("n", "4"), ("n", "102.8249"), ("n", "95.55114")],
    [("n", "1985"), ("n", "5"), ("n", "120.0107"), ("inline", "112.1006")],
    [("n", "1985"), ("n", "6"), ("n", "135.4232"), None],
    [("s", 4)],
]

def cell(ref, c):
    kind, v = c
    if kind == "s":
        return f'<c r="{ref}" t="s"><v>{v}</v></c>'
    if kind == "inline":
        return f'<c r="{ref}" t="inlineStr"><is><t>{v}</t></is></c>'
    return f'<c r="{ref}"><v>{v}</v></c>'

sheet_rows = []
for r, row in enumerate(rows, start=1):
    cells = "".join(cell(f"{'ABCD'[i]}{r}", c) for i, c in enumerate(row) if c is not None)
    sheet_rows.append(f'<row r="{r}">{cells}</row>')
sheet = ('<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
         '<worksheet xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main"><sheetData>'
         + "".join(sheet_rows) + '</sheetData></worksheet>')
sst = ('<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
       f'<sst xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main" count="{len(strings)}">'
       + "".join(f"<si><t>{s}</t></si>" for s in strings) + "</sst>")

with zipfile.ZipFile("epu_monthly_fixture.xlsx", "w", zipfile.ZIP_DEFLATED) as z:
    z.writestr("[Content_Types].xml", '<?xml version="1.0"?><Types/>')
    z.writestr("xl/workbook.xml", '<?xml version="1.0"?><workbook/>')
    z.writestr("xl/sharedStrings.xml", sst)
    z.writestr("xl/worksheets/sheet1.xml", sheet)
    # stored (uncompressed) member, to exercise both code paths
    z.writestr(zipfile.ZipInfo("docProps/app.xml"), "<Properties/>")
