"""Expected transmission log-volume over a binary channel with cumulative damage.

The channel behaves like a BSC until the number of damaging events caused
by transmitted ones exceeds a budget S, after which it erases everything.
The package computes achievability and converse curves by dynamic
programming, recovers the optimal block schedules and checks them by
Monte Carlo.
"""

from ._accel import USE_NUMBA, backend_name
from .code_size import (AliveChannel, InputType, capacity_cost, cond_info_variance,
                        dispersion_cost, log_m_avg, log_m_ccc, mutual_information)
from .dp_achievability import DPTable, solve_achievability, solve_single_block, traceback
from .dp_converse import (ConverseTables, alive_upper, solve_converse,
                          solve_single_block_converse, traceback_converse)
from .majorization import (InfeasibleError, KaramataPreconditionError, LcrcSolution,
                           karamata_check, lcrc_max_exact, lcrc_max_relaxed, majorizing_sequence)
from .prob_core import DamageParams, be_envelope, binom_cdf, f_be, f_n, q_inv
from .schedule import BlockPlan, Schedule, ScheduleError, evaluate_schedule
from .simulator import SimResult, feedback_identity, simulate_schedule

__version__ = "0.1.0"
