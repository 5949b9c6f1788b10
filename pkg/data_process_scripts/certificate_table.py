import argparse
import json

import pandas as pd

COLUMNS = ['file', 'kind', 'stage', 'p', 'factor_poly', 'r', 'type_label', 'branch', 'ell', 'volume_ratio',
           'required_checks', 'diagnostic_hits', 'strict_hits', 'witness']


def prime_rows(record:dict, **extra) -> dict:
    report = record['avoidance_report']
    return dict(extra,
                p=record['prime']['p'],
                factor_poly=' '.join(str(c) for c in record['prime']['factor_poly']),
                r=record['prime']['r'],
                type_label=record['reduction']['type_label'],
                branch=record['cover_prime']['branch'],
                ell=int(record['cover_prime']['ell']),
                required_checks=sum(1 for c in report if c['role'] == 'required'),
                diagnostic_hits=sum(1 for c in report if c['role'] == 'diagnostic' and c['divides']),
                strict_hits=sum(1 for c in report if c['role'] == 'strict' and c['divides']),
                witness=record.get('witness') is not None)


def certificate_rows(cert:dict, file:str) -> list:
    kind = cert['kind']
    if kind == 'equivalence':
        return [prime_rows(cert, file=file, kind=kind, stage=None, volume_ratio=int(cert['volume_ratio']))]
    if kind == 'isospectral_pair':
        return [prime_rows(rec, file=file, kind=kind, stage=None, volume_ratio=None) for rec in cert['primes']]
    return [prime_rows(rec, file=file, kind=kind, stage=stage['index'], volume_ratio=int(stage['volume_ratio']))
            for stage in cert['stages'] for rec in stage['primes']]


def certificate_table(paths) -> pd.DataFrame:
    rows = []
    for path in paths:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        for cert in (data if isinstance(data, list) else [data]):
            rows += certificate_rows(cert, str(path))
    return pd.DataFrame(rows, columns=COLUMNS)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='flatten certificate JSON files into a CSV table')
    parser.add_argument('paths', nargs='+')
    parser.add_argument('--out', default='certificates.csv')
    args = parser.parse_args()
    df = certificate_table(args.paths)
    df.to_csv(args.out, index=False)
    print(f"{len(df)} rows written to {args.out}")
