import argparse
import logging
import sys

import pandas as pd
import sympy

import opt
from orbicover import certify, matgroup, numfield, orders, quadform, schema
from orbicover.errors import InputError, OrbicoverError, UsageError, WrongSignatureProfile

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VERIFY_FAILED = 0, 1


def _write(text:str, out:str=None):
    if out is None or out == '-':
        sys.stdout.write(text + '\n')
    else:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text + '\n')


def _load_pair(args):
    spec = schema.parse_input(schema.read_json(args.input))
    _apply_options(args, spec)
    return spec.build_pair()


def _apply_options(args, spec:schema.InputSpec):
    # flag > input options > opt defaults
    defaults = {'bound': opt.pair_search_bound if getattr(args, 'pair', False) else opt.default_bound,
                'mode': opt.default_mode, 'seed': opt.default_seed, 'with_witness': opt.with_witness,
                'format': getattr(args, 'default_format', None)}
    for key, default in defaults.items():
        if getattr(args, key, 'absent') is None:
            setattr(args, key, spec.options.get(key, default))


def _place_table(field:numfield.NumberField, form:quadform.QuadraticForm) -> pd.DataFrame:
    rows = []
    for place in range(len(field.real_roots)):
        pos, neg = quadform.signature_at(field, form, place)
        rows.append({'place': place, 'theta': f"{float(numfield.root_approximation(field, place)):.{opt.root_digits - 1}f}",
                     'signature': f"({pos},{neg})"})
    return pd.DataFrame(rows, columns=['place', 'theta', 'signature'])


def cmd_validate(args) -> int:
    spec = schema.parse_input(schema.read_json(args.input))
    field = spec.build_field()
    form = spec.build_form(field)
    try:
        pair = quadform.is_admissible(field, form)
    except WrongSignatureProfile as e:
        _write(f"inadmissible: place {e.place} has signature {e.signature}")
        _write(_place_table(field, form).to_string(index=False))
        raise
    theta = numfield.root_approximation(field, pair.distinguished_place)
    _write(f"admissible, m={pair.m}, distinguished place θ≈{float(theta):.{opt.root_digits - 1}f}")
    _write(_place_table(field, form).to_string(index=False))
    return EXIT_OK


def _order_text(fo:orders.FactoredOrder) -> str:
    return f"{fo} = {fo.value()}" if fo.bounded else str(fo)


def cmd_primes(args) -> int:
    pair = _load_pair(args)
    scan = certify.good_primes(pair, args.bound, workers=args.workers)
    if args.format == 'json':
        _write(schema.dumps({'bound': args.bound,
                             'good': [{'prime': schema.encode_prime(gp.pf), 'type_label': gp.type_label,
                                       'reduction': schema.encode_reduction(gp.fqform),
                                       'group_order': schema.encode_factored(gp.group_order)} for gp in scan.good],
                             'exclusions': [ex.to_dict() for ex in scan.exclusions]}), args.out)
        return EXIT_OK
    good = pd.DataFrame([{'p': gp.pf.p, 'factor_poly': list(gp.pf.factor_poly), 'r': gp.pf.r,
                          'type': gp.type_label, '|G_P|': str(gp.group_order)} for gp in scan.good],
                        columns=['p', 'factor_poly', 'r', 'type', '|G_P|'])
    excluded = pd.DataFrame([{'p': ex.p, 'reason': ex.reason,
                              'factor_poly': '' if ex.factor_poly is None else list(ex.factor_poly)}
                             for ex in scan.exclusions], columns=['p', 'reason', 'factor_poly'])
    lines = [f"good primes up to {args.bound}:", good.to_string(index=False) if len(good) else '(none)',
             'excluded:', excluded.to_string(index=False) if len(excluded) else '(none)']
    _write('\n'.join(lines), args.out)
    return EXIT_OK


def _summary(cert) -> str:
    if isinstance(cert, certify.EquivalenceCertificate):
        pf, cp = cert.prime.pf, cert.cover_prime
        required = [c for c in cp.avoidance_report if c.role == 'required']
        return (f"equivalence at ({pf.p}, {list(pf.factor_poly)}), r={pf.r}: {cp.branch}, ell={cp.ell}, "
                f"volume ratio {cert.volume_ratio}, |G_P| = {_order_text(cert.prime.group_order)}, "
                f"{len(required)} required checks passed")
    if isinstance(cert, certify.IsospectralPairCertificate):
        first, second = cert.primes
        return (f"isospectral pair over {cert.p}: {list(first.pf.factor_poly)} and {list(second.pf.factor_poly)}, "
                f"shared ell={cert.shared_ell}, covers {', '.join(c.name for c in cert.covers)}")
    return (f"tower ({cert.strategy}): volume ratios {[s.volume_ratio for s in cert.stages]}, "
            f"ell histogram {cert.ell_histogram}")


def cmd_certify(args) -> int:
    pair = _load_pair(args)
    options = dict(mode=args.mode, seed=args.seed)
    if args.prime is not None:
        if args.prime < 2 or not sympy.isprime(args.prime):
            raise UsageError(f"--prime {args.prime} is not prime")
        certs = certify.certify_prime(pair, args.prime, with_witness=args.with_witness, **options)
        payload = [certify.certificate_to_dict(c) for c in certs]
    elif args.pair:
        certs = [certify.build_pair_certificate(pair, args.bound, with_witness=args.with_witness, **options)]
        payload = certify.certificate_to_dict(certs[0])
    else:
        certs = [certify.build_tower_certificate(pair, args.tower, args.bound, **options)]
        payload = certify.certificate_to_dict(certs[0])
    if args.format == 'json':
        _write(schema.dumps(payload), args.out)
    else:
        _write('\n'.join(_summary(c) for c in certs) + f"\nseed={args.seed}", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    data = schema.read_json(args.certificate)
    certs = data if isinstance(data, list) else [data]
    status = EXIT_OK
    for i, cert in enumerate(certs):
        report = certify.verify_certificate(cert)
        verdict = 'ok' if report.passed else 'FAILED'
        _write(f"[{i}] {report.kind}: {verdict} ({len(report.results)} claims)")
        for failure in report.failures:
            _write(f"    failed: {failure.claim}" + (f" ({failure.detail})" if failure.detail else ''))
        if not report.passed:
            status = EXIT_VERIFY_FAILED
    return status


def cmd_orders(args) -> int:
    if args.dim % 2 == 0 and args.square_class is None:
        raise UsageError(f"--square-class is required for even dimension {args.dim}")
    if args.p < 3 or not sympy.isprime(args.p):
        raise UsageError(f"--p {args.p} is not an odd prime")
    fo = orders.so_order(args.dim, args.p, args.r, args.square_class if args.dim % 2 == 0 else None)
    _write(f"|SO| ({fo.label}) = {_order_text(fo)}")
    if args.oracle is None:
        return EXIT_OK
    form = matgroup.standard_form(args.dim, args.p, args.r, args.square_class)
    counted = matgroup.brute_force_so_count(form) if args.oracle == 'brute' else matgroup.point_count_so_order(form)
    agrees = counted == fo.value()
    _write(f"{args.oracle} oracle: {counted} ({'agrees' if agrees else 'DISAGREES'})")
    return EXIT_OK if agrees else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='orbicover',
                                     description='Certificates for geometrically equivalent covers of arithmetic '
                                                 'hyperbolic orbifolds')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    parser.add_argument('--progress', action='store_true', help='show progress bars')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', help='check that the input is an admissible hyperbolic pair')
    p.add_argument('input', help="input JSON file or '-'")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('primes', help='list good primes and exclusions')
    p.add_argument('input')
    p.add_argument('--bound', type=int)
    p.add_argument('--workers', type=int, default=opt.num_workers)
    p.add_argument('--format', choices=['text', 'json'])
    p.add_argument('--out')
    p.set_defaults(func=cmd_primes, default_format='text')

    p = sub.add_parser('certify', help='build certificates')
    p.add_argument('input')
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument('--prime', type=int)
    target.add_argument('--pair', action='store_true')
    target.add_argument('--tower', type=int, metavar='J')
    p.add_argument('--bound', type=int)
    p.add_argument('--mode', choices=list(orders.MODES))
    p.add_argument('--seed', type=int)
    p.add_argument('--with-witness', action='store_true', default=None)
    p.add_argument('--workers', type=int, default=opt.num_workers)
    p.add_argument('--format', choices=['text', 'json'])
    p.add_argument('--out')
    p.set_defaults(func=cmd_certify, default_format='json')

    p = sub.add_parser('verify', help='re-check a certificate file')
    p.add_argument('certificate')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('orders', help='finite orthogonal group orders')
    p.add_argument('--dim', type=int, required=True)
    p.add_argument('--p', type=int, required=True)
    p.add_argument('--r', type=int, default=1)
    p.add_argument('--square-class', choices=list(orders.SQUARE_CLASSES))
    p.add_argument('--oracle', choices=['brute', 'count'])
    p.set_defaults(func=cmd_orders)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else InputError.exit_code
    logging.basicConfig(level=logging.DEBUG if args.verbose else opt.log_level, format=opt.log_format,
                        stream=sys.stderr)
    opt.show_progress = opt.show_progress or args.progress
    if getattr(args, 'workers', None) is not None:
        opt.num_workers = args.workers
    try:
        return args.func(args)
    except OrbicoverError as e:
        logger.debug("%s", type(e).__name__, exc_info=True)
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return e.exit_code
