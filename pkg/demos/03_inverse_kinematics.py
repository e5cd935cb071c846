"""Learning the inverse kinematics of the SCARA arm.

Samples reachable tool positions, ant-selects initial RBF centers from the
training inputs, grows and weight-trains the network per sample, then
scores held-out points by mapping the predicted joints back through the
forward kinematics.  A lighter budget than the packaged defaults keeps the
demo around ten seconds; `acorbfn train-ik` runs the full configuration.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import acorbfn as ab
from acorbfn import aco, rbfn


def main():
    robot = ab.RobotParams()
    print("=" * 60)
    print("Inverse-kinematics approximation")
    print("=" * 60)

    report = ab.run_ik_experiment(
        robot,
        aco.AcoConfig(centers_to_pick=40, rng_seed=7),
        rbfn.TrainConfig(learning_rate=0.1, error_target=1e-3,
                         max_hidden=100, max_epochs=200, rng_seed=7),
        n_train=600, n_test=150, rng_seed=7)

    tr = report.train_report
    print(f"hidden units: 40 ant-selected, grown to {report.net.hidden_count}")
    print(f"training epochs used: {tr.epochs_used}, final batch error {tr.final_error:.2f}")
    print(f"held-out mean joint error:      {report.mean_joint_error:.4f} rad")
    print(f"held-out mean cartesian error:  {report.mean_cartesian_error:.4f} m")

    cart = np.array([row[-1] for row in report.rows])
    joint = np.array([row[-2] for row in report.rows])
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    axes[0].hist(cart, bins=30, color="#1f77b4")
    axes[0].set_xlabel("cartesian round-trip error [m]")
    axes[0].set_ylabel("held-out points")
    axes[1].hist(joint, bins=30, color="#2ca02c")
    axes[1].set_xlabel("joint-space error [rad]")
    fig.suptitle("Learned inverse kinematics, held-out error distributions")
    fig.savefig("ik_errors.png", dpi=120, bbox_inches="tight")
    print("\nwrote ik_errors.png")


if __name__ == "__main__":
    main()
