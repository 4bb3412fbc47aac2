#!/usr/bin/env python3
"""Convert the Online Retail workbook (Online Retail.xlsx) to the CSV layout
rfmseg reads, and print its SHA-256 so runs can be tied to an exact file.

    python3 scripts/convert_online_retail.py "Online Retail.xlsx" online_retail.csv

Needs pandas and openpyxl. Dates are written as M/D/YYYY H:MM (the default
date_format), prices with their recorded decimals, CustomerID as an integer
or empty.
"""

import argparse
import csv
import hashlib
import sys

import pandas as pd

COLUMNS = ["InvoiceNo", "StockCode", "Description", "Quantity", "InvoiceDate", "UnitPrice", "CustomerID", "Country"]


def fmt_price(v: float) -> str:
    # repr gives the shortest round-tripping decimal, e.g. 2.55 or 0.001
    text = repr(float(v))
    return text[:-2] if text.endswith(".0") else text


def fmt_date(ts: pd.Timestamp) -> str:
    return f"{ts.month}/{ts.day}/{ts.year} {ts.hour}:{ts.minute:02d}"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("xlsx")
    ap.add_argument("csv")
    args = ap.parse_args()

    df = pd.read_excel(args.xlsx, dtype={"InvoiceNo": str, "StockCode": str, "Description": str, "Country": str})
    missing = [c for c in COLUMNS if c not in df.columns]
    if missing:
        print(f"missing columns: {missing}", file=sys.stderr)
        return 1

    with open(args.csv, "w", newline="", encoding="utf-8") as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in df[COLUMNS].itertuples(index=False):
            cust = "" if pd.isna(row.CustomerID) else str(int(row.CustomerID))
            desc = "" if pd.isna(row.Description) else row.Description
            w.writerow([row.InvoiceNo, row.StockCode, desc, int(row.Quantity), fmt_date(row.InvoiceDate),
                        fmt_price(row.UnitPrice), cust, row.Country])

    h = hashlib.sha256()
    with open(args.csv, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    print(f"{len(df)} rows written to {args.csv}")
    print(f"sha256 {h.hexdigest()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
