import json

from data_process_scripts.certificate_table import COLUMNS, certificate_table
from orbicover import certify


def dump(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def test_table_rows(tmp_path, running_pair):
    certs = [certify.certificate_to_dict(c) for c in certify.certify_prime(running_pair, 7, with_witness=True)]
    tower = certify.certificate_to_dict(certify.build_tower_certificate(running_pair, 2, 100))
    df = certificate_table([dump(tmp_path, 'prime7.json', certs), dump(tmp_path, 'tower.json', tower)])
    assert list(df.columns) == COLUMNS
    assert len(df) == 2 + 1 + 2
    equivalence = df[df['kind'] == 'equivalence']
    assert list(equivalence['ell']) == [5, 5]
    assert list(equivalence['factor_poly']) == ['4 1', '3 1']
    assert equivalence['witness'].all()
    assert (equivalence['required_checks'] == 1).all()
    stages = df[df['kind'] == 'tower']
    assert list(stages['stage']) == [1, 2, 2]
    assert list(stages['volume_ratio']) == [5, 25, 25]
