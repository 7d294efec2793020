"""Production line with workload-dependent random machine failures.

Thin Python front end over the C++ simulator. Trajectory and ensemble series
come back as numpy arrays.
"""

from ._pdmpline import (
    ConfigError,
    DomainError,
    EnsembleStats,
    FlowStepReport,
    InflowProfile,
    InvariantError,
    JumpEvent,
    JumpKind,
    MachineStatus,
    ModelParams,
    RunConfig,
    SampleError,
    Scenario,
    SeriesEstimate,
    SystemState,
    TrajectoryRecord,
    apply_jump,
    characteristic_failure_time,
    execute,
    failure_rate,
    first_failure_survival,
    flow_advance,
    load_config,
    mean_time_to_failure,
    preset_config,
    preset_names,
    queue_step,
    rate_bound,
    repair_rate,
    run_ensemble,
    simulate_trajectory,
    trajectory_seed,
    upwind_step,
    version,
    workload_step,
)

__version__ = version()


def preset_scenario(name):
    """Scenario of a compiled-in preset ("paper-g1" or "paper-g2")."""
    return preset_config(name).scenario
