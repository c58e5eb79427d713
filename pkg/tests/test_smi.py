import copy

import numpy as np
import pytest

from reference import make_objective, psd_kernels, ref_evaluate, suite_kernels
from smiselect.errors import ConfigError, ContractViolation, NumericalDegeneracyError
from smiselect.kernels import KernelSet, SimilarityKernel
from smiselect.smi import VARIANTS, SmiObjective


# -- evaluate ----------------------------------------------------------------


@pytest.mark.parametrize("variant", VARIANTS)
def test_empty_selection_evaluates_to_zero(variant):
    rng = np.random.default_rng(0)
    obj = make_objective(variant, *suite_kernels(rng, variant, 6, 3))
    assert obj.evaluate([]) == 0.0


def test_gcmi_single_element_hand_value():
    s_uq = np.array([[0.5, 0.3], [0.1, 0.2]])
    obj = make_objective("gcmi", None, s_uq, None, lam=1.0)
    assert obj.evaluate([0]) == pytest.approx(2.0 * (0.5 + 0.3))  # 1.6


def test_flqmi_two_by_one_hand_value():
    # one query; similarities 0.9 and 0.4: max-coverage term 0.9, relevance
    # terms 0.9 + 0.4, total 2.2
    s_uq = np.array([[0.9], [0.4]])
    obj = make_objective("flqmi", None, s_uq, None)
    assert obj.evaluate([0, 1]) == pytest.approx(2.2)


def test_logdetmi_zero_cross_similarity_is_zero():
    rng = np.random.default_rng(1)
    s_uu, _, s_qq = psd_kernels(rng, 5, 2)
    s_uq = np.zeros((5, 2))
    obj = make_objective("logdetmi", s_uu, s_uq, s_qq, eps=1e-6)
    assert abs(obj.evaluate([0, 2, 4])) < 1e-9


@pytest.mark.parametrize("variant", VARIANTS)
def test_evaluate_matches_reference(variant):
    rng = np.random.default_rng(2)
    for _ in range(20):
        n, q = int(rng.integers(3, 10)), int(rng.integers(1, 4))
        s_uu, s_uq, s_qq = suite_kernels(rng, variant, n, q)
        obj = make_objective(variant, s_uu, s_uq, s_qq, lam=1.3, eps=1e-6)
        k = int(rng.integers(1, n + 1))
        sel = [int(i) for i in rng.permutation(n)[:k]]
        expect = ref_evaluate(variant, s_uu, s_uq, s_qq, sel, lam=1.3, eps=1e-6)
        assert obj.evaluate(sel) == pytest.approx(expect, abs=1e-8)


def test_evaluate_rejects_unknown_id():
    obj = make_objective("gcmi", None, np.array([[0.5]]), None)
    with pytest.raises(ContractViolation):
        obj.evaluate([7])


def test_evaluate_rejects_duplicates():
    obj = make_objective("gcmi", None, np.array([[0.5], [0.2]]), None)
    with pytest.raises(ContractViolation):
        obj.evaluate([0, 0])


# -- marginal gains and state updates ----------------------------------------


def test_gcmi_gain_is_modular():
    rng = np.random.default_rng(3)
    s_uq = rng.uniform(size=(6, 2))
    obj = make_objective("gcmi", None, s_uq, None)
    state = obj.new_state()
    gain_cold = obj.marginal_gain(state, 4)
    for a in (0, 1, 2):
        obj.update_state(state, a)
    assert obj.marginal_gain(state, 4) == pytest.approx(gain_cold)


def test_flqmi_duplicate_gain_is_relevance_only():
    s_uq = np.array([[0.7, 0.2], [0.7, 0.2], [0.1, 0.1]])
    obj = make_objective("flqmi", None, s_uq, None)
    state = obj.new_state()
    obj.update_state(state, 0)
    # id 1 has an identical kernel row: the coverage term is fully stale
    assert obj.marginal_gain(state, 1) == pytest.approx(0.7)


def test_logdetmi_incremental_matches_evaluate_difference():
    rng = np.random.default_rng(4)
    s_uu, s_uq, s_qq = psd_kernels(rng, 6, 3)
    obj = make_objective("logdetmi", s_uu, s_uq, s_qq, eps=1e-6)
    state = obj.new_state()
    selected = []
    for a in (2, 0, 5, 3):
        expect = obj.evaluate(selected + [a]) - obj.evaluate(selected)
        assert obj.marginal_gain(state, a) == pytest.approx(expect, abs=1e-8)
        obj.update_state(state, a)
        selected.append(a)


@pytest.mark.parametrize("variant", VARIANTS)
def test_cached_value_matches_scratch_after_updates(variant):
    rng = np.random.default_rng(5)
    n = 12
    s_uu, s_uq, s_qq = suite_kernels(rng, variant, n, 3)
    obj = make_objective(variant, s_uu, s_uq, s_qq, eps=1e-6)
    state = obj.new_state()
    order = [int(i) for i in rng.permutation(n)[:10]]
    for a in order:
        obj.update_state(state, a)
        assert state.value == pytest.approx(obj.evaluate(state.selected), abs=1e-8)
    assert state.selected == order


def test_update_rejects_reselection():
    obj = make_objective("flqmi", None, np.array([[0.5], [0.2]]), None)
    state = obj.new_state()
    obj.update_state(state, 1)
    with pytest.raises(ContractViolation):
        obj.marginal_gain(state, 1)
    with pytest.raises(ContractViolation):
        obj.update_state(state, 1)


def test_flvmi_maxima_monotone_nondecreasing():
    rng = np.random.default_rng(6)
    s_uu, s_uq, s_qq = suite_kernels(rng, "flvmi", 8, 2)
    obj = make_objective("flvmi", s_uu, s_uq, None)
    state = obj.new_state()
    prev = state.m_unlabeled.copy()
    for a in (3, 1, 7):
        obj.update_state(state, a)
        assert np.all(state.m_unlabeled >= prev - 1e-15)
        prev = state.m_unlabeled.copy()


def test_logdetmi_cholesky_factors_are_lower_triangular():
    rng = np.random.default_rng(7)
    obj = make_objective("logdetmi", *psd_kernels(rng, 7, 2), eps=1e-6)
    state = obj.new_state()
    for a in (0, 4, 6):
        obj.update_state(state, a)
    for factor in (state.chol_plain, state.chol_cond):
        assert np.allclose(factor, np.tril(factor))
        assert np.all(np.diag(factor) > 0)


def test_logdetmi_permutation_invariant():
    rng = np.random.default_rng(8)
    s_uu, s_uq, s_qq = psd_kernels(rng, 8, 3)
    obj = make_objective("logdetmi", s_uu, s_uq, s_qq, eps=1e-6)
    sel = [1, 4, 6, 2]
    assert obj.evaluate(sel) == pytest.approx(obj.evaluate([6, 2, 1, 4]), abs=1e-8)


def test_logdetmi_degenerate_duplicate_names_offender():
    # two identical documents with a vanishing regularizer: the plain Schur
    # complement collapses to ~0 when the duplicate is added
    s_uu = np.array([[1.0, 1.0, 0.2], [1.0, 1.0, 0.2], [0.2, 0.2, 1.0]])
    s_uq = np.array([[0.5], [0.5], [0.1]])
    s_qq = np.array([[1.0]])
    obj = make_objective("logdetmi", s_uu, s_uq, s_qq, eps=1e-300)
    state = obj.new_state()
    obj.update_state(state, 0)
    with pytest.raises(NumericalDegeneracyError, match="id 1"):
        obj.update_state(state, 1)


def test_gcmi_lambda_and_scale_leave_greedy_order_unchanged():
    from smiselect.optimizer import naive_greedy

    rng = np.random.default_rng(9)
    s_uq = rng.uniform(size=(10, 3))
    baseline = None
    for lam, scale in ((1.0, 1.0), (0.5, 1.0), (7.0, 1.0), (1.0, 0.25), (3.0, 4.0)):
        obj = make_objective("gcmi", None, scale * s_uq, None, lam=lam)
        order = naive_greedy(obj, list(range(10)), 5).selected_ids
        if baseline is None:
            baseline = order
        assert order == baseline


# -- construction validation -------------------------------------------------


def test_missing_required_block_rejected():
    s_uq = np.array([[0.5], [0.2]])
    kernels = KernelSet(
        uq=SimilarityKernel(values=s_uq, measure="cosine-rescaled",
                            row_ids=[0, 1], col_ids=[0])
    )
    with pytest.raises(ContractViolation):
        SmiObjective("flvmi", kernels)
    with pytest.raises(ContractViolation):
        SmiObjective("logdetmi", kernels)


def test_bad_parameters_rejected():
    s_uq = np.array([[0.5], [0.2]])
    with pytest.raises(ConfigError):
        make_objective("gcmi", None, s_uq, None, lam=0.0)
    with pytest.raises(ConfigError):
        make_objective("flqmi", None, s_uq, None, eps=-1.0)
    with pytest.raises(ConfigError):
        make_objective("nope", None, s_uq, None)


def test_default_epsilon_scales_with_kernel_diagonal():
    rng = np.random.default_rng(10)
    s_uu, s_uq, s_qq = psd_kernels(rng, 5, 2)
    obj = make_objective("logdetmi", 4.0 * s_uu, 4.0 * s_uq, 4.0 * s_qq, eps=None)
    assert obj.epsilon == pytest.approx(4e-6)


def test_state_copies_are_independent():
    rng = np.random.default_rng(11)
    obj = make_objective("flvmi", *suite_kernels(rng, "flvmi", 6, 2))
    state = obj.new_state()
    obj.update_state(state, 0)
    clone = copy.deepcopy(state)
    obj.update_state(clone, 1)
    assert state.selected == [0]
    assert clone.selected == [0, 1]
