"""Problem containers, conversions, the chain generator, and serialization."""

import json

import numpy as np
import pytest

from annealgap import (
    IsingProblem,
    MisChainSpec,
    ProblemFormatError,
    QuboProblem,
    SpinAssignment,
    ising_to_qubo,
    load_problem,
    mis_chain,
    qubo_to_ising,
    save_problem,
)
from conftest import (
    ROW_ISING,
    ROW_ISING_H0,
    ROW_QUBO,
    ROW_QUBO_H0,
    assert_coefficients,
    dense_ising_energy,
    dense_qubo_energy,
    enumerate_qubo,
    random_ising,
    random_qubo,
)


class TestProblemConstruction:
    def test_self_coupling_rejected(self):
        with pytest.raises(ProblemFormatError, match="self-coupling"):
            IsingProblem(n=3, J={(1, 1): 1.0}, h=(0, 0, 0))

    def test_index_bounds(self):
        with pytest.raises(ProblemFormatError, match="out of range"):
            QuboProblem(n=3, Q={(0, 7): 1.0}, b=(0, 0, 0))

    def test_reversed_key_normalized(self):
        p = IsingProblem(n=3, J={(2, 0): 1.5}, h=(0, 0, 0))
        assert p.J == {(0, 2): 1.5}

    def test_duplicate_unordered_pair_rejected(self):
        with pytest.raises(ProblemFormatError, match="duplicate"):
            IsingProblem(n=3, J={(0, 1): 1.0, (1, 0): 2.0}, h=(0, 0, 0))

    def test_zero_entries_dropped(self):
        p = IsingProblem(n=2, J={(0, 1): 0.0}, h=(1.0, 2.0))
        assert p.J == {}

    def test_default_fields_are_zero(self):
        p = IsingProblem(n=3, J={(0, 1): 1.0})
        assert p.h == (0.0, 0.0, 0.0)

    def test_linear_length_mismatch(self):
        with pytest.raises(ProblemFormatError, match="length"):
            IsingProblem(n=3, J={}, h=(1.0, 2.0))

    def test_frozen(self):
        p = IsingProblem(n=2, J={}, h=(0, 0))
        with pytest.raises(AttributeError):
            p.offset = 1.0


class TestSpinAssignment:
    def test_q_to_sigma(self):
        a = SpinAssignment((1, 0, 1), "q")
        assert a.to_sigma().values == (1, -1, 1)

    def test_sigma_to_q(self):
        a = SpinAssignment((-1, 1, -1), "sigma")
        assert a.to_q().values == (0, 1, 0)

    def test_round_trip_exact(self):
        a = SpinAssignment((1, 0, 0, 1, 1), "q")
        assert a.to_sigma().to_q() == a

    def test_bad_values(self):
        with pytest.raises(ProblemFormatError):
            SpinAssignment((0, 2), "q")
        with pytest.raises(ProblemFormatError):
            SpinAssignment((0, 1), "sigma")

    def test_basis_index_round_trip(self):
        for m in range(16):
            a = SpinAssignment.from_basis_index(m, 4)
            assert a.basis_index == m

    def test_basis_convention(self):
        # bit 0 means q = 1 (sigma = +1)
        a = SpinAssignment.from_basis_index(0, 3)
        assert a.values == (1, 1, 1)
        assert a.to_sigma().values == (1, 1, 1)


class TestQuboToIsing:
    def test_golden_row(self):
        p = QuboProblem(n=5, Q=ROW_QUBO["Q"], b=ROW_QUBO["b"])
        assert_coefficients(qubo_to_ising(p), ROW_ISING["J"], ROW_ISING["h"])

    def test_golden_row_offset(self):
        p = QuboProblem(n=5, Q=ROW_QUBO["Q"], b=ROW_QUBO["b"])
        assert qubo_to_ising(p).offset == pytest.approx(-5.90, abs=1e-12)

    def test_zero_problem(self):
        p = QuboProblem(n=4, Q={}, b=(0, 0, 0, 0))
        out = qubo_to_ising(p)
        assert out.J == {} and out.h == (0, 0, 0, 0) and out.offset == 0

    def test_random_4_spin_energy_identity(self, rng):
        p = random_qubo(rng, 4)
        ising = qubo_to_ising(p)
        for q, expected in enumerate_qubo(p):
            sigma = tuple(2 * qi - 1 for qi in q)
            assert dense_ising_energy(ising, sigma) == pytest.approx(
                expected, abs=1e-12
            )


class TestIsingToQubo:
    def test_golden_transformed_row(self):
        p = IsingProblem(n=5, J=ROW_ISING_H0["J"], h=ROW_ISING_H0["h"])
        assert_coefficients(ising_to_qubo(p), ROW_QUBO_H0["Q"], ROW_QUBO_H0["b"])

    def test_zero_problem(self):
        p = IsingProblem(n=3, J={}, h=(0, 0, 0))
        out = ising_to_qubo(p)
        assert out.Q == {} and out.b == (0, 0, 0) and out.offset == 0

    def test_round_trip_on_golden_row(self):
        p = QuboProblem(n=5, Q=ROW_QUBO["Q"], b=ROW_QUBO["b"], offset=0.25)
        back = ising_to_qubo(qubo_to_ising(p))
        assert_coefficients(back, ROW_QUBO["Q"], ROW_QUBO["b"])
        assert back.offset == pytest.approx(0.25, abs=1e-12)

    def test_round_trip_random(self, rng):
        for n in (2, 5, 9):
            p = random_ising(rng, n)
            back = qubo_to_ising(ising_to_qubo(p))
            assert_coefficients(back, p.J, p.h)
            assert back.offset == pytest.approx(p.offset, abs=1e-12)


class TestEnergy:
    def test_chain_ground_assignment(self):
        p = mis_chain(MisChainSpec(0.04))
        energies = dict(enumerate_qubo(p))
        assert min(energies.values()) == pytest.approx(-12.0, abs=1e-12)
        winners = [q for q, e in energies.items() if e == pytest.approx(-12.0, abs=1e-9)]
        assert winners == [(1, 0, 1, 0, 1)]
        assert p.energy(SpinAssignment((1, 0, 1, 0, 1), "q")) == pytest.approx(
            -12.0, abs=1e-12
        )

    def test_chain_adjacent_pair(self):
        p = mis_chain(MisChainSpec(0.04))
        a = SpinAssignment((1, 1, 0, 0, 0), "q")
        assert p.energy(a) == pytest.approx(6.08 - 4.0 - 5.96, abs=1e-12)
        assert p.energy(a) == pytest.approx(dense_qubo_energy(p, a.values), abs=1e-12)

    def test_zero_problem_any_assignment(self):
        p = QuboProblem(n=3, Q={}, b=(0, 0, 0))
        assert p.energy(SpinAssignment((1, 1, 0), "q")) == 0.0

    def test_length_mismatch(self):
        p = QuboProblem(n=3, Q={}, b=(0, 0, 0))
        with pytest.raises(ProblemFormatError, match="length"):
            p.energy(SpinAssignment((1, 0), "q"))

    def test_form_auto_conversion(self, rng):
        p = random_ising(rng, 4)
        q = SpinAssignment((1, 0, 0, 1), "q")
        assert p.energy(q) == pytest.approx(p.energy(q.to_sigma()), abs=1e-14)


class TestMisChain:
    def test_golden_row(self):
        assert_coefficients(mis_chain(MisChainSpec(0.04)), ROW_QUBO["Q"], ROW_QUBO["b"])

    def test_low_spectrum(self):
        p = mis_chain(MisChainSpec(0.04))
        energies = sorted(e for _, e in enumerate_qubo(p))
        assert energies[0] == pytest.approx(-12.0, abs=1e-12)
        assert energies[1] == pytest.approx(-11.96, abs=1e-12)

    @pytest.mark.parametrize("delta_b", [0.01, 0.02, 0.04, 0.06, 0.08])
    def test_final_gap_equals_delta_b(self, delta_b):
        p = mis_chain(MisChainSpec(delta_b))
        energies = sorted(e for _, e in enumerate_qubo(p))
        assert energies[1] - energies[0] == pytest.approx(delta_b, abs=1e-12)

    def test_degenerate_at_zero(self):
        p = mis_chain(MisChainSpec(0.0))
        energies = sorted(e for _, e in enumerate_qubo(p))
        assert energies[1] - energies[0] == pytest.approx(0.0, abs=1e-12)
        assert energies[2] - energies[0] > 1.0

    def test_negative_delta_b_rejected(self):
        with pytest.raises(ProblemFormatError):
            MisChainSpec(-0.01)

    def test_coupling_parameter(self):
        p = mis_chain(MisChainSpec(0.04, coupling=3.0))
        assert all(v == 3.0 for v in p.Q.values())


class TestSerialization:
    def test_round_trip_bit_identical(self, tmp_path):
        path = tmp_path / "chain.json"
        p = mis_chain(MisChainSpec(0.04))
        save_problem(p, path)
        loaded = load_problem(path)
        assert isinstance(loaded, QuboProblem)
        assert loaded.Q == p.Q
        assert loaded.b == p.b
        assert loaded.offset == p.offset

    def test_round_trip_ising(self, tmp_path):
        path = tmp_path / "ising.json"
        p = IsingProblem(n=5, J=ROW_ISING["J"], h=ROW_ISING["h"], offset=-5.9)
        save_problem(p, path)
        loaded = load_problem(path)
        assert isinstance(loaded, IsingProblem)
        assert loaded == p

    def _write(self, path, doc):
        path.write_text(json.dumps(doc))

    def test_self_coupling_file(self, tmp_path):
        path = tmp_path / "bad.json"
        self._write(
            path,
            {"form": "qubo", "n": 5, "quadratic": [[3, 3, 1.0]], "linear": [0] * 5, "offset": 0},
        )
        with pytest.raises(ProblemFormatError, match="self-coupling"):
            load_problem(path)

    def test_out_of_bounds_file(self, tmp_path):
        path = tmp_path / "bad.json"
        self._write(
            path,
            {"form": "qubo", "n": 5, "quadratic": [[0, 7, 1.0]], "linear": [0] * 5, "offset": 0},
        )
        with pytest.raises(ProblemFormatError, match="out of range"):
            load_problem(path)

    def test_duplicate_pair_file(self, tmp_path):
        path = tmp_path / "bad.json"
        self._write(
            path,
            {
                "form": "ising",
                "n": 3,
                "quadratic": [[0, 1, 1.0], [1, 0, 2.0]],
                "linear": [0, 0, 0],
                "offset": 0,
            },
        )
        with pytest.raises(ProblemFormatError, match="duplicate"):
            load_problem(path)

    def test_parse_failure(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json {")
        with pytest.raises(ProblemFormatError, match="JSON"):
            load_problem(path)

    def test_unknown_form(self, tmp_path):
        path = tmp_path / "bad.json"
        self._write(path, {"form": "maxcut", "n": 2, "quadratic": [], "linear": [0, 0]})
        with pytest.raises(ProblemFormatError, match="form"):
            load_problem(path)

    def test_reversed_single_key_accepted(self, tmp_path):
        path = tmp_path / "ok.json"
        self._write(
            path,
            {"form": "ising", "n": 2, "quadratic": [[1, 0, 0.5]], "linear": [0, 0], "offset": 0},
        )
        assert load_problem(path).J == {(0, 1): 0.5}


class TestEnergyConsistency:
    """Convention-independent identity: QUBO and converted Ising energies agree."""

    @pytest.mark.parametrize("seed", [3, 11, 42])
    def test_exhaustive_n5(self, seed):
        rng = np.random.default_rng(seed)
        p = random_qubo(rng, 5)
        ising = qubo_to_ising(p)
        for q, expected in enumerate_qubo(p):
            a = SpinAssignment(q, "q")
            assert ising.energy(a.to_sigma()) == pytest.approx(expected, abs=1e-12)
            assert p.energy(a) == pytest.approx(expected, abs=1e-12)

    def test_exhaustive_n12(self, rng):
        p = random_qubo(rng, 12, density=0.3)
        ising = qubo_to_ising(p)
        for m in range(1 << 12):
            a = SpinAssignment.from_basis_index(m, 12)
            assert ising.energy(a) == pytest.approx(p.energy(a), abs=1e-12)
