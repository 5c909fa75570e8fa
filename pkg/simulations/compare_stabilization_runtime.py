"""
Compare the runtime and the answers of the stabilization pipeline and of the dense oracle
on families of systems of growing size: wave systems, Lie-algebra systems, and two-component
systems with three or two Lagrangians.

Author: Erel Segal-Halevi
Since:  2024-05
"""

import varmult
from varmult import algebras

TIME_LIMIT = 120


def wave(size: int) -> varmult.FGordonSystem:
    return varmult.FGordonSystem.from_strings(["0"] * size)


def heisenberg(size: int) -> varmult.FGordonSystem:
    return algebras.lie_system(algebras.heisenberg(size))


def semidirect(size: int) -> varmult.FGordonSystem:
    D = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    return algebras.lie_system(algebras.semidirect(D))


def scalar_potential(size: int) -> varmult.FGordonSystem:
    """ u_xy = x^size y u, v_xy = x^size y v: three Lagrangians. """
    return varmult.FGordonSystem.from_strings([f"x^{size}*y*u", f"x^{size}*y*v"])


def coupled_potential(size: int) -> varmult.FGordonSystem:
    """ u_xy = size (u + v)^(size-1), v_xy = the same: two Lagrangians of wave type. """
    rhs = f"{size}*(u + v)^{size - 1}"
    return varmult.FGordonSystem.from_strings([rhs, rhs])


FAMILIES = {
    "wave": wave,
    "heisenberg": heisenberg,
    "semidirect": semidirect,
    "scalar_potential": scalar_potential,
    "coupled_potential": coupled_potential,
}


def analyze_family_member(family: str, size: int, pipeline: str, seed: int):
    system = FAMILIES[family](size)
    if pipeline == "stabilize":
        report = varmult.analyze(varmult.analysis.stabilize, system, seed=seed, degree_cap=2)
        return {"m": system.m, "dimension": report.dimension, "rank": report.rank,
                "stage": report.stabilized_stage, "closed_form": report.closed_form}
    return {"m": system.m, "dimension": varmult.analysis.dense_dimension(system, seed=seed)}


if __name__ == "__main__":
    import logging, experiments_csv
    experiments_csv.logger.setLevel(logging.INFO)
    experiment = experiments_csv.Experiment("results/", "stabilization_runtime_1.csv", backup_folder=None)

    input_ranges = {
        "family": list(FAMILIES),
        "size": [1, 2, 3, 4],
        "pipeline": ["stabilize", "dense"],
        "seed": [2009],
    }
    experiment.run_with_time_limit(analyze_family_member, input_ranges, time_limit=TIME_LIMIT)
