import logging

# Primes
default_bound = 100
irreducibility_primes = 25  # mod-p irreducibility attempts before the exact fallback
pair_search_bound = 1000
common_ell_search_bound = 10**4

# Factoring
trial_division_bound = 10**6
rho_step_budget = 10**7  # per factor
rho_retries = 5

# Groups
brute_force_limit = 10**8  # q^(dim^2)
point_count_limit = 10**7  # q^dim per recursion level
witness_attempts = 10**4
isotropic_search_budget = 10**4

# Certificates
schema_version = 'orbicover/1'
hash_algorithm = 'sha256'
default_mode = 'paper'  # 'paper' or 'strict'
default_seed = 0
with_witness = False
json_indent = 2

# Display
root_digits = 5
show_progress = False
log_level = logging.WARNING
log_format = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# Concurrency
num_workers = 1  # >1 scans primes in a process pool
