"""Ant-colony-optimized RBF networks for SCARA arm control.

The package splits into five layers: rigid-body dynamics of the three-link
arm (:mod:`acorbfn.dynamics`), the Gaussian RBF network and its per-sample
weight training (:mod:`acorbfn.rbfn`), ant-colony center selection with a
k-means baseline (:mod:`acorbfn.aco`), the adaptive tracking controller
(:mod:`acorbfn.controller`), and the closed-loop simulation plus the
inverse-kinematics learning experiment (:mod:`acorbfn.sim`).  A command
line front end lives in :mod:`acorbfn.cli`.
"""

from .aco import (
    AcoConfig,
    AcoResult,
    AntSolution,
    ComparisonReport,
    KmeansResult,
    PheromoneState,
    compare_clustering,
    kmeans_centers,
    make_blob_benchmark,
    run_aco_centers,
    solution_cost,
)
from .controller import (
    ControllerConfig,
    ControlState,
    DesiredTrajectory,
    adapt_weights,
    control_law,
    desired_at,
    sliding_surface,
)
from .dynamics import (
    JointState,
    OutOfWorkspace,
    PayloadSchedule,
    RobotParams,
    SingularMass,
    analytic_ik,
    coriolis_matrix,
    disturbance,
    forward_dynamics,
    forward_kinematics,
    friction_force,
    gravity_vector,
    mass_matrix,
    total_energy,
)
from .rbfn import (
    RbfNetwork,
    TrainConfig,
    TrainReport,
    basis_eval,
    batch_error,
    forward,
    grow_hidden_node,
    lms_step,
    load_network,
    save_network,
    train_lms,
    widths_from_spread,
)
from .sim import (
    IkReport,
    Metrics,
    SimConfig,
    SimTrace,
    SimulationAborted,
    compute_metrics,
    rk4_step,
    run_ik_experiment,
    run_simulation,
)

__version__ = "0.1.0"
