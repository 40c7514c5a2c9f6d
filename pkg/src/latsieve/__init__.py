"""3D special-q lattice sieve for NFS-style relation collection.

The pipeline: build the special-q lattice, reduce it exactly, rewrite
each factor-base prime's sublattice in its coordinates, enumerate the
sieve cuboid plane-by-plane along the successive-minima frame, collect
(key, log p) hits, sort and scan for threshold survivors, and confirm
candidates by trial division plus p-1 / rho cofactorization.
"""

from .arith import (
    LeadingCoeffVanishes,
    NotCoprime,
    Poly,
    PrimeRoot,
    crt_combine,
    norm_abc,
    poly_eval_mod,
    primes_upto,
    resultant,
    roots_mod_p,
    round_log2,
)
from .config import ConfigError, SieveConfig, load_config, parse_config
from .engine import (
    Candidate,
    FactorBaseEntry,
    HitList,
    InvalidRoot,
    OutOfRegion,
    build_factor_base,
    decode_key,
    decode_keys,
    dump_hits,
    encode_key,
    encode_keys,
    load_hits,
    sieve_side,
    sieve_special_q,
    sort_and_scan,
)
from .enumerate import (
    DegenerateNormal,
    PlaneFrame,
    RegionTooLarge,
    enumerate_bruteforce,
    enumerate_ground,
    enumerate_lattice,
    enumerate_plane,
    enumerate_zplanes,
    ilp_feasible_point,
    plane_frame,
    plane_range,
    reduced_frame,
)
from .lattice import (
    Basis3,
    NotSublattice,
    SingularBasis,
    SpecialQ,
    lll_reduce,
    pq_basis,
    special_q_basis,
    sublattice_coords,
    to_abc,
)
from .region import Region, region_from_bits
from .runner import Siever, run_bench, run_sieve, run_verify
from .smooth import (
    Relation,
    build_relation,
    cofactorize,
    is_prime,
    pollard_pm1,
    pollard_rho,
    trial_divide,
)

__version__ = "0.1.0"
