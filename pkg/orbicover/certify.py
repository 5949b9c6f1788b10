"""Certificates for geometrically equivalent and isospectral congruence covers.

The lattice is never represented: everything is relative to the principal lattice of the
input pair, and a certificate records the finite-group data (reduction, group order, cover
prime, avoidance checks) that a verifier can recompute from the input alone.
"""
import functools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import sympy
from tqdm import tqdm

import opt
from orbicover import finfield, matgroup, numfield, orders, quadform, schema
from orbicover.errors import (BadPrime, BadReduction, DenominatorNotCoprime, DyadicPrime, InsufficientPrimes,
                              MalformedCertificate, MalformedInput, NoCommonEll, OrbicoverError, PreconditionError)
from orbicover.numfield import PrimeIdealFactor
from orbicover.orders import EVEN_SQUARE, CoverPrime, FactoredOrder

logger = logging.getLogger(__name__)

SAME_ELL = 'SameEllManyPrimes'
DISTINCT_ELLS = 'ManyDistinctElls'


@dataclass(frozen=True)
class GoodPrime:
    pf: PrimeIdealFactor
    fqform: quadform.FqForm
    group_order: FactoredOrder
    type_label: str
    index_bound: tuple = (1, 2)

    def sort_key(self) -> tuple:
        return self.pf.sort_key()


@dataclass(frozen=True)
class Exclusion:
    p: int
    reason: str  # dyadic | bad_poly_disc | denominator | bad_reduction
    factor_poly: tuple = None
    detail: str = ''

    def to_error(self, pair:quadform.AdmissiblePair) -> PreconditionError:
        if self.reason == 'dyadic':
            return DyadicPrime("2 is dyadic")
        if self.reason == 'bad_poly_disc':
            return BadPrime(self.p, pair.field.poly_disc)
        if self.reason == 'denominator':
            return DenominatorNotCoprime(self.p, int(self.detail))
        return BadReduction(self.p, self.factor_poly, int(self.detail))

    def to_dict(self) -> dict:
        return {'p': self.p, 'reason': self.reason,
                'factor_poly': None if self.factor_poly is None else list(self.factor_poly), 'detail': self.detail}


@dataclass(frozen=True)
class PrimeScan:
    good: tuple
    exclusions: tuple

    def __iter__(self):
        return iter(self.good)

    def __len__(self):
        return len(self.good)


@dataclass(frozen=True)
class Assertion:
    text: str
    anchor: str


@dataclass(frozen=True, eq=False)
class Witness:
    matrix: matgroup.FqMatrix
    order: int
    eigenvalue_avoidance: bool = None


@dataclass(frozen=True)
class EquivalenceCertificate:
    pair: quadform.AdmissiblePair
    input_digest: str
    prime: GoodPrime
    cover_prime: CoverPrime
    cover_data: dict
    volume_ratio: int
    assertions: tuple
    mode: str
    seed: int
    witness: Witness = field(default=None, compare=False)

    @property
    def checks(self) -> tuple:
        return self.cover_prime.avoidance_report


@dataclass(frozen=True)
class Cover:
    name: str
    subgroup: str
    subgroup_order: int  # degree of the kernel cover over this one


@dataclass(frozen=True)
class IsospectralPairCertificate:
    pair: quadform.AdmissiblePair
    input_digest: str
    p: int
    primes: tuple  # two GoodPrime
    cover_primes: tuple  # two CoverPrime with the same ell
    shared_ell: int
    covers: tuple
    multiplicity_assertion: Assertion
    nonisometry_assertion: Assertion
    assertions: tuple
    mode: str
    seed: int
    witnesses: tuple = field(default=(None, None), compare=False)


@dataclass(frozen=True)
class TowerStage:
    index: int
    primes: tuple  # GoodPrime
    cover_primes: tuple
    ell: int
    volume_ratio: int


@dataclass(frozen=True)
class TowerCertificate:
    pair: quadform.AdmissiblePair
    input_digest: str
    stages: tuple
    strategy: str
    ell_histogram: dict
    bound: int
    mode: str
    seed: int


# prime scan
def _denominators(pair:quadform.AdmissiblePair) -> list:
    return pair.field.norm_denominators(pair.form.diagonal)


def good_primes_over(pair:quadform.AdmissiblePair, p:int) -> tuple:
    if p == 2:
        return [], [Exclusion(2, 'dyadic')]
    if pair.field.poly_disc % p == 0:
        return [], [Exclusion(p, 'bad_poly_disc', detail=str(pair.field.poly_disc))]
    bad = [den for den in _denominators(pair) if den % p == 0]
    if bad:
        return [], [Exclusion(p, 'denominator', detail=str(bad[0]))]
    good, exclusions = [], []
    for pf in numfield.factor_prime(pair.field, p):
        try:
            good.append(make_good_prime(pair, pf))
        except BadReduction as e:
            exclusions.append(Exclusion(p, 'bad_reduction', pf.factor_poly, str(e.entry)))
    return good, exclusions


def make_good_prime(pair:quadform.AdmissiblePair, pf:PrimeIdealFactor) -> GoodPrime:
    fqform = quadform.reduce_form(pair, pf)
    group_order = orders.so_order(fqform.dim, pf.p, pf.r, fqform.square_class)
    return GoodPrime(pf=pf, fqform=fqform, group_order=group_order, type_label=fqform.type_label)


def good_primes(pair:quadform.AdmissiblePair, bound:int, workers:int=None) -> PrimeScan:
    """Good primes P | p <= bound with the reason each excluded prime failed.

    With workers > 1 the rational primes are scanned in a process pool; the result is ordered
    by (p, factor_poly) either way.
    """
    workers = opt.num_workers if workers is None else workers
    primes = list(sympy.primerange(2, bound + 1))
    scan = functools.partial(good_primes_over, pair)
    if workers > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(tqdm(pool.map(scan, primes), total=len(primes), desc='primes',
                                disable=not opt.show_progress))
    else:
        results = [scan(p) for p in tqdm(primes, desc='primes', disable=not opt.show_progress)]
    good = [gp for g, _ in results for gp in g]
    exclusions = [ex for _, e in results for ex in e]
    logger.debug("scanned %d primes <= %d: %d good, %d excluded", len(primes), bound, len(good), len(exclusions))
    return PrimeScan(tuple(sorted(good, key=GoodPrime.sort_key)),
                     tuple(sorted(exclusions, key=lambda e: (e.p, e.factor_poly or ()))))


def verify_exclusion(pair:quadform.AdmissiblePair, exclusion:Exclusion) -> bool:
    _, exclusions = good_primes_over(pair, exclusion.p)
    return exclusion in exclusions


# assertions
def _common_assertions(pair:quadform.AdmissiblePair) -> list:
    assertions = [
        Assertion("rho_P(Gamma) has index 1 or 2 in G_P = SO(q_P), so |rho_P(Gamma)| is |G_P| or |G_P|/2",
                  'index-ambiguity'),
        Assertion("rho_P is onto G_P up to that index for all but finitely many P; "
                  "this P is assumed to be one of them", 'strong-approximation'),
        Assertion("primes over divisors of the central-kernel index may also need exclusion; "
                  "the index is not computable without lattice generators", 'central-kernel-primes'),
    ]
    if pair.m == 3:
        assertions.append(Assertion("m = 3: this case of the construction is already known", 'prior-work'))
    return assertions


def _equivalence_assertions(ell:int) -> list:
    return [
        Assertion(f"ell = {ell} divides no order bound for the image of a totally geodesic subgroup "
                  f"(required checks of the avoidance report), so every such image meets C_P trivially "
                  f"and ker rho_P, rho_P^-1(C_P) see the same totally geodesic subspaces", 'subgroup-condition'),
        Assertion(f"C_P is cyclic of odd prime order {ell}, so it lies in rho_P(Gamma) for either index",
                  'cyclic-inclusion'),
        Assertion(f"the covering M_1 -> M_C has odd degree {ell}, so orientability of totally geodesic "
                  f"subspaces is unchanged", 'odd-degree-orientation'),
    ]


def _cover_data(group_order:FactoredOrder, ell:int) -> dict:
    n = group_order.value()
    return {'kernel_index': [str(n), str(n // 2)],
            'cover_index': [str(n // ell), str(n // (2 * ell))],
            'index_ratio': str(ell),
            'subgroups': {'M_1': 'ker rho_P', 'M_C': 'rho_P^-1(C_P)'}}


def _witness(gp:GoodPrime, cp:CoverPrime, seed:int) -> Witness:
    if cp.branch == EVEN_SQUARE:
        lam = finfield.multiplicative_generator(gp.fqform.ctx)
        g = matgroup.build_cyclic_generator(gp.fqform, lam)
        w = matgroup.power(g, cp.a)
        return Witness(w, matgroup.matrix_order(w, cp.ell), matgroup.eigenvalue_pm1_avoidance(g, cp.a, cp.ell))
    w = matgroup.find_order_l_element(gp.fqform, cp.ell, gp.group_order, seed)
    return Witness(w, matgroup.matrix_order(w, cp.ell))


def _options(mode, with_witness, seed) -> tuple:
    return (opt.default_mode if mode is None else mode,
            opt.with_witness if with_witness is None else with_witness,
            opt.default_seed if seed is None else seed)


def _digest(pair:quadform.AdmissiblePair) -> str:
    return schema.digest(schema.input_from_pair(pair).to_dict())


def build_certificate(pair:quadform.AdmissiblePair, gp:GoodPrime, mode:str=None, with_witness:bool=None,
                      seed:int=None) -> EquivalenceCertificate:
    mode, with_witness, seed = _options(mode, with_witness, seed)
    cp = orders.select_cover_prime(gp.fqform, pair.m, mode, seed)
    witness = _witness(gp, cp, seed) if with_witness else None
    logger.info("certificate for (%d, %s): ell = %d (%s)", gp.pf.p, list(gp.pf.factor_poly), cp.ell, cp.branch)
    return EquivalenceCertificate(pair=pair, input_digest=_digest(pair), prime=gp, cover_prime=cp,
                                  cover_data=_cover_data(gp.group_order, cp.ell), volume_ratio=cp.ell,
                                  assertions=tuple(_equivalence_assertions(cp.ell) + _common_assertions(pair)),
                                  mode=mode, seed=seed, witness=witness)


def certify_prime(pair:quadform.AdmissiblePair, p:int, mode:str=None, with_witness:bool=None,
                  seed:int=None) -> list:
    good, exclusions = good_primes_over(pair, p)
    if not good:
        raise exclusions[0].to_error(pair)
    return [build_certificate(pair, gp, mode, with_witness, seed) for gp in good]


def _shared_cover_primes(pair:quadform.AdmissiblePair, first:GoodPrime, second:GoodPrime, mode:str, seed:int):
    try:
        cps = [orders.select_cover_prime(gp.fqform, pair.m, mode, seed) for gp in (first, second)]
        if cps[0].ell == cps[1].ell:
            return cps
    except PreconditionError as e:
        logger.debug("default cover primes unavailable (%s), searching a common ell", e)
    for ell in sympy.primerange(3, opt.common_ell_search_bound + 1):
        if ell == first.pf.p:
            continue
        try:
            return [orders.cover_prime_for_ell(gp.fqform, pair.m, ell, mode) for gp in (first, second)]
        except PreconditionError:
            continue
    raise NoCommonEll(f"no odd prime <= {opt.common_ell_search_bound} works at both primes over {first.pf.p}")


def build_pair_certificate(pair:quadform.AdmissiblePair, bound:int, mode:str=None, with_witness:bool=None,
                           seed:int=None) -> IsospectralPairCertificate:
    mode, with_witness, seed = _options(mode, with_witness, seed)

    def reduces_well(pf):
        try:
            make_good_prime(pair, pf)
        except (BadReduction, DenominatorNotCoprime):
            return False
        return True

    p, pf1, pf2 = numfield.find_split_pair(pair.field, bound, accept=reduces_well)
    first, second = make_good_prime(pair, pf1), make_good_prime(pair, pf2)
    cp1, cp2 = _shared_cover_primes(pair, first, second, mode, seed)
    ell = cp1.ell
    witnesses = (_witness(first, cp1, seed), _witness(second, cp2, seed)) if with_witness else (None, None)

    covers = (Cover('M_{ell,1}', 'C_P1 x {1}', ell),
              Cover('M_{1,ell}', '{1} x C_P2', ell),
              Cover('M_{ell,ell}', 'C_P1 x C_P2', ell * ell))
    multiplicity = Assertion(
        f"every totally geodesic subspace X of M_{{ell,ell}} has exactly {ell} distinct lifts to M_{{ell,1}} and "
        f"to M_{{1,ell}}, so both geometric spectra equal {{(X, {ell} m_X)}} with m_X the multiplicity in "
        f"M_{{ell,ell}}", 'multiplicity-scaling')
    nonisometry = Assertion(
        f"every element of pi_1(M_{{1,ell}}) is trivial modulo P1 = ({p}, {list(pf1.factor_poly)}) while infinitely "
        f"many elements of pi_1(M_{{ell,1}}) map to generators of C_P1; an isometry would be conjugation in the "
        f"commensurator by rigidity and would preserve this, so the two covers are not isometric",
        'rigidity-nonisometry')
    logger.info("isospectral pair over %d with shared ell = %d", p, ell)
    return IsospectralPairCertificate(
        pair=pair, input_digest=_digest(pair), p=p, primes=(first, second), cover_primes=(cp1, cp2), shared_ell=ell,
        covers=covers, multiplicity_assertion=multiplicity, nonisometry_assertion=nonisometry,
        assertions=tuple(_equivalence_assertions(ell) + _common_assertions(pair)), mode=mode, seed=seed,
        witnesses=witnesses)


def build_tower_certificate(pair:quadform.AdmissiblePair, j_max:int, bound:int, mode:str=None,
                            seed:int=None) -> TowerCertificate:
    """Stages with volume ratios ell^j (one ell, many primes) or ell_j (distinct ells)."""
    mode, _, seed = _options(mode, False, seed)
    if j_max < 1:
        raise MalformedInput(f"tower height must be >= 1, got {j_max}")
    by_ell = {}
    for gp in tqdm(good_primes(pair, bound).good, desc='tower', disable=not opt.show_progress):
        try:
            cp = orders.select_cover_prime(gp.fqform, pair.m, mode, seed)
        except PreconditionError as e:
            logger.debug("skipping %d: %s", gp.pf.p, e)
            continue
        by_ell.setdefault(cp.ell, []).append((gp, cp))
    histogram = {ell: len(found) for ell, found in sorted(by_ell.items())}

    shared = [ell for ell, found in sorted(by_ell.items()) if len(found) >= j_max]
    if shared:
        ell = shared[0]
        found = by_ell[ell]
        stages = tuple(TowerStage(j, tuple(gp for gp, _ in found[:j]), tuple(cp for _, cp in found[:j]), ell, ell ** j)
                       for j in range(1, j_max + 1))
        strategy = SAME_ELL
    elif len(by_ell) >= j_max:
        ells = sorted(by_ell)[:j_max]
        stages = tuple(TowerStage(j, (by_ell[ell][0][0],), (by_ell[ell][0][1],), ell, ell)
                       for j, ell in enumerate(ells, start=1))
        strategy = DISTINCT_ELLS
    else:
        raise InsufficientPrimes(f"{sum(histogram.values())} usable primes up to {bound} give neither {j_max} "
                                 f"primes with one ell nor {j_max} distinct ells")
    logger.info("tower of height %d via %s: ratios %s", j_max, strategy, [s.volume_ratio for s in stages])
    return TowerCertificate(pair=pair, input_digest=_digest(pair), stages=stages, strategy=strategy,
                            ell_histogram=histogram, bound=bound, mode=mode, seed=seed)


# serialization
def _prime_record(gp:GoodPrime, cp:CoverPrime, witness:Witness=None) -> dict:
    return {'prime': schema.encode_prime(gp.pf),
            'reduction': schema.encode_reduction(gp.fqform),
            'group_order': schema.encode_factored(gp.group_order),
            'index_bound': list(gp.index_bound),
            'cover_prime': schema.encode_cover_prime(cp),
            'avoidance_report': [schema.encode_check(c) for c in cp.avoidance_report],
            'witness': schema.encode_witness(witness)}


def _assertions(assertions) -> list:
    return [{'text': a.text, 'anchor': a.anchor} for a in assertions]


def certificate_to_dict(cert) -> dict:
    base = {'version': opt.schema_version,
            'hash_algorithm': opt.hash_algorithm,
            'input': schema.input_from_pair(cert.pair).to_dict(),
            'input_digest': cert.input_digest,
            'mode': cert.mode,
            'seed': cert.seed,
            'lattice_generators': None}
    if isinstance(cert, EquivalenceCertificate):
        base.update(kind='equivalence', volume_ratio=str(cert.volume_ratio), cover_data=cert.cover_data,
                    assertions=_assertions(cert.assertions))
        base.update(_prime_record(cert.prime, cert.cover_prime, cert.witness))
    elif isinstance(cert, IsospectralPairCertificate):
        base.update(kind='isospectral_pair', p=cert.p, shared_ell=str(cert.shared_ell),
                    primes=[_prime_record(gp, cp, w) for gp, cp, w in zip(cert.primes, cert.cover_primes, cert.witnesses)],
                    covers=[{'name': c.name, 'subgroup': c.subgroup, 'subgroup_order': str(c.subgroup_order)}
                            for c in cert.covers],
                    multiplicity_assertion={'text': cert.multiplicity_assertion.text,
                                            'anchor': cert.multiplicity_assertion.anchor},
                    nonisometry_assertion={'text': cert.nonisometry_assertion.text,
                                           'anchor': cert.nonisometry_assertion.anchor},
                    assertions=_assertions(cert.assertions))
    elif isinstance(cert, TowerCertificate):
        base.update(kind='tower', strategy=cert.strategy, bound=cert.bound,
                    ell_histogram={str(ell): count for ell, count in cert.ell_histogram.items()},
                    stages=[{'index': s.index, 'ell': str(s.ell), 'volume_ratio': str(s.volume_ratio),
                             'primes': [_prime_record(gp, cp) for gp, cp in zip(s.primes, s.cover_primes)]}
                            for s in cert.stages])
    else:
        raise TypeError(f"not a certificate: {type(cert).__name__}")
    return base


# verification
@dataclass(frozen=True)
class ClaimResult:
    claim: str
    passed: bool
    detail: str = ''


@dataclass
class VerificationReport:
    kind: str
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def claim(self, claim:str, passed:bool, detail:str=''):
        self.results.append(ClaimResult(claim, bool(passed), detail))
        return passed


def _get(obj:dict, key:str, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedCertificate(f"missing field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise MalformedCertificate(f"field {key!r} has the wrong type")
    return value


def _int(value, key:str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise MalformedCertificate(f"field {key!r} is not an integer") from e


def _verify_prime_record(pair:quadform.AdmissiblePair, record:dict, mode:str, report:VerificationReport,
                         tag:str):
    prime = _get(record, 'prime', dict)
    p, r = _int(_get(prime, 'p'), 'p'), _int(_get(prime, 'r'), 'r')
    factor_poly = tuple(_int(c, 'factor_poly') for c in _get(prime, 'factor_poly', list))
    pf = PrimeIdealFactor(p=p, factor_poly=factor_poly, r=r)
    ok = report.claim(f"{tag}: prime ideal", p > 2 and sympy.isprime(p) and pair.field.poly_disc % p != 0
                      and len(factor_poly) == r + 1 and finfield.is_irreducible_mod_p(p, factor_poly)
                      and finfield.poly_divides_mod_p(p, factor_poly, pair.field.min_poly),
                      f"({p}, {list(factor_poly)}) with r = {r}")
    if not ok:
        return None, pf
    try:
        fqform = quadform.reduce_form(pair, pf)
    except OrbicoverError as e:
        report.claim(f"{tag}: good reduction", False, str(e))
        return None, pf

    reduction = _get(record, 'reduction', dict)
    report.claim(f"{tag}: reduction", schema.encode_reduction(fqform) == reduction)
    expected = orders.so_order(fqform.dim, p, r, fqform.square_class)
    report.claim(f"{tag}: group order", schema.encode_factored(expected) == _get(record, 'group_order', dict),
                 str(expected))

    cover = _get(record, 'cover_prime', dict)
    ell = _int(_get(cover, 'ell'), 'ell')
    branch, n = orders.cover_branch(fqform)
    d = r if branch == EVEN_SQUARE else n * r
    report.claim(f"{tag}: branch", _get(cover, 'branch') == branch and _get(cover, 'd') == d,
                 f"expected {branch} with d = {d}")
    valid = orders.branch_condition(ell, p, r, branch, n)
    detail = (f"ell = {ell} must divide {p}^{r} - 1" if branch == EVEN_SQUARE
              else f"ord_{ell}({p}) must be {2 * d}")
    report.claim(f"{tag}: ell fits the branch", valid, detail)
    if ell == p or ell < 2 or not sympy.isprime(ell):
        report.claim(f"{tag}: ell is a prime other than p", False, str(ell))
        return ell, pf

    recorded = _get(record, 'avoidance_report', list)
    recomputed = orders.avoidance_report(fqform.dim, pair.m, p, r, ell, branch, mode)
    report.claim(f"{tag}: avoidance report covers every bound", len(recorded) == len(recomputed),
                 f"{len(recorded)} recorded, {len(recomputed)} expected")
    for stored, check in zip(recorded, recomputed):
        factors = _get(stored, 'factors', list)
        if not all(isinstance(f, list) for f in factors):
            raise MalformedCertificate(f"{tag}: factors of {check.bound_label!r} are not pairs")
        same = (_get(stored, 'bound_label') == check.bound_label and _get(stored, 'role') == check.role
                and [tuple(f) for f in factors] == list(check.factors))
        report.claim(f"{tag}: {check.bound_label}", same and _get(stored, 'divides') == check.divides and check.passed,
                     f"ell = {ell} {'divides' if check.divides else 'does not divide'} ({check.role})")

    witness = record.get('witness')
    if witness is not None:
        _verify_witness(fqform, ell, _get(record, 'witness', dict), report, tag)
    return ell, pf


def _verify_witness(fqform:quadform.FqForm, ell:int, witness:dict, report:VerificationReport, tag:str):
    try:
        m = matgroup.FqMatrix.from_entries(fqform.ctx, _get(witness, 'matrix', list))
    except (ValueError, TypeError) as e:
        raise MalformedCertificate(f"witness matrix: {e}") from e
    report.claim(f"{tag}: witness lies in SO(q_P)", m.dim == fqform.dim and matgroup.is_special_isometry(fqform, m))
    one = matgroup.identity(fqform.ctx, fqform.dim)
    report.claim(f"{tag}: witness has order ell",
                 m != one and matgroup.power(m, ell) == one and _int(_get(witness, 'order'), 'order') == ell)
    if witness.get('eigenvalue_avoidance') is not None:
        report.claim(f"{tag}: no power of the witness has eigenvalue +-1",
                     matgroup.eigenvalue_pm1_avoidance(m, 1, ell) and witness['eigenvalue_avoidance'])


def verify_certificate(cert) -> VerificationReport:
    """Recompute every claim of a certificate (object or decoded JSON) from its input alone."""
    if not isinstance(cert, dict):
        cert = certificate_to_dict(cert)
    kind = _get(cert, 'kind', str)
    report = VerificationReport(kind)
    report.claim('version', _get(cert, 'version') == opt.schema_version)
    raw_input = _get(cert, 'input', dict)
    try:
        spec = schema.parse_input(raw_input)
    except MalformedInput as e:
        raise MalformedCertificate(f"input: {e}") from e
    report.claim('input digest', schema.digest(spec.to_dict()) == _get(cert, 'input_digest'))
    try:
        pair = spec.build_pair()
    except OrbicoverError as e:
        report.claim('admissible input', False, str(e))
        return report
    report.claim('admissible input', True)
    mode = _get(cert, 'mode', str)
    if mode not in orders.MODES:
        raise MalformedCertificate(f"unknown mode {mode!r}")

    if kind == 'equivalence':
        ell, pf = _verify_prime_record(pair, cert, mode, report, 'prime')
        report.claim('volume ratio is ell', ell is not None and _int(_get(cert, 'volume_ratio'), 'volume_ratio') == ell)
        if ell is not None and report.passed:
            gp = make_good_prime(pair, pf)
            report.claim('cover indices', _get(cert, 'cover_data', dict) == _cover_data(gp.group_order, ell))
    elif kind == 'isospectral_pair':
        records = _get(cert, 'primes', list)
        if len(records) != 2:
            raise MalformedCertificate("a pair certificate has exactly two primes")
        (ell1, pf1), (ell2, pf2) = [_verify_prime_record(pair, rec, mode, report, f"prime {i + 1}")
                                    for i, rec in enumerate(records)]
        report.claim('isomorphic residue fields',
                     (pf1.p, pf1.r) == (pf2.p, pf2.r) and pf1.p == _int(_get(cert, 'p'), 'p'))
        report.claim('distinct primes', pf1.factor_poly != pf2.factor_poly)
        shared = _int(_get(cert, 'shared_ell'), 'shared_ell')
        report.claim('shared ell', ell1 == ell2 == shared)
        subgroup_orders = [_int(_get(c, 'subgroup_order'), 'subgroup_order') for c in _get(cert, 'covers', list)]
        report.claim('cover subgroups', subgroup_orders == [shared, shared, shared * shared])
    elif kind == 'tower':
        stages = _get(cert, 'stages', list)
        strategy = _get(cert, 'strategy')
        ratios, stage_ells, previous = [], [], []
        for stage in stages:
            index = _int(_get(stage, 'index'), 'index')
            verified = [_verify_prime_record(pair, rec, mode, report, f"stage {index} prime {i + 1}")
                        for i, rec in enumerate(_get(stage, 'primes', list))]
            ell = _int(_get(stage, 'ell'), 'ell')
            ratio = _int(_get(stage, 'volume_ratio'), 'volume_ratio')
            expected = ell ** index if strategy == SAME_ELL else ell
            report.claim(f"stage {index}: primes use ell", bool(verified) and all(e == ell for e, _ in verified))
            report.claim(f"stage {index}: volume ratio", ratio == expected, f"expected {expected}")
            if strategy == SAME_ELL:
                keys = [(pf.p, pf.factor_poly) for _, pf in verified]
                report.claim(f"stage {index}: {index} distinct primes", len(set(keys)) == index)
                report.claim(f"stage {index}: extends the previous stage", keys[:len(previous)] == previous)
                previous = keys
            ratios.append(ratio)
            stage_ells.append(ell)
        if strategy == SAME_ELL:
            report.claim('one ell for every stage', len(set(stage_ells)) == 1, str(stage_ells))
        report.claim('volume ratios increase', bool(ratios) and all(a < b for a, b in zip(ratios, ratios[1:])))
    else:
        raise MalformedCertificate(f"unknown certificate kind {kind!r}")
    logger.info("verified %s certificate: %d claims, %d failed", kind, len(report.results), len(report.failures))
    return report
