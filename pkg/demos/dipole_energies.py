"""Static dipole-dipole energies: closed form, commutator route, self energy.

The generator of the multi-dipole gauge transformation produces, through a
single commutator, the full static interaction network: every unordered pair
of dipoles acquires the familiar

    eps_dip = (d . d' - 3 (d . Rhat)(d' . Rhat)) / (4 pi eps0 R^3)

and every dipole acquires a regulator-dependent self energy.  This script
builds a small chain of dipoles, compares both evaluation routes, and sweeps
the self-energy regulator to exhibit its 1/sigma^3 divergence.
"""

import numpy as np

from dipolegauge import (
    Dipole,
    DipoleConfig,
    build_mode_lattice,
    epsilon_dip_from_commutator,
    epsilon_self_regularized,
    transform_report,
)


def main():
    spacing = 0.12
    config = DipoleConfig(
        dipoles=(
            Dipole([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
            Dipole([0.0, 0.0, spacing], [0.6, 0.8, 0.0]),
            Dipole([0.0, 0.0, 2 * spacing], [0.5, 0.5, 0.8]),
        )
    )
    lattice = build_mode_lattice(1.0, 24)
    sigma = spacing / 6.0

    report = transform_report(config, lattice, sigma)
    print(f"three dipoles on the z axis, spacing {spacing}, sigma = {sigma:.4f}")
    print()
    print(f"{'pair':>8} {'separation':>11} {'closed form':>12} {'mode-sum route':>15} {'rel diff':>9}")
    for (q, qp), closed in sorted(report.pair_energies.items()):
        route = epsilon_dip_from_commutator(q, qp, config, lattice, sigma)
        rel = abs(route - closed) / abs(closed)
        gap = np.linalg.norm(
            config.dipoles[q].position - config.dipoles[qp].position
        )
        print(f"  ({q},{qp}) {gap:>11.2f} {closed:>12.6f} {route:>15.6f} {rel:>9.2e}")
    print()
    print("the nearest-neighbor pairs agree to under a percent; the outer")
    print("pair sits at twice the separation, where the nearest periodic image")
    print("(at distance L - rho) contaminates the box mode sum, so its")
    print("agreement window is visibly tighter; growing L (or N with it)")
    print("pushes that error down")
    print()
    print(f"total interaction energy: {report.total_interaction:.6f}")
    print(f"total self energy at this sigma: {report.self_energy:.3f}")
    print()

    # the pair energies are regulator-independent in the window sigma << R;
    # the self energy is not: it diverges like 1/sigma^3 as the regulator
    # tightens, which is the finite-mode-sum image of the point-dipole
    # singularity
    print(f"{'sigma':>10} {'self energy of d=(1,0,0)':>26}")
    for sigma_k in np.geomspace(1 / 100, 1 / 20, 5):
        eps_self = epsilon_self_regularized([1.0, 0.0, 0.0], lattice, sigma_k)
        print(f"{sigma_k:>10.5f} {eps_self:>26.3f}")
    near, far = (
        epsilon_self_regularized([1.0, 0.0, 0.0], lattice, 1 / 100),
        epsilon_self_regularized([1.0, 0.0, 0.0], lattice, 1 / 50),
    )
    print()
    print(f"halving sigma scales the self energy by {near / far:.2f} (ideal: 8)")


if __name__ == "__main__":
    main()
