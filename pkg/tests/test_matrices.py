import random

from rcyclo.matrices import (
    AbGroup,
    Mat,
    PresentedModule,
    brute_force_kernel_cokernel,
    f2_kernel,
    f2_rank,
    fp_rref,
    invert_unimodular,
    kernel_basis,
    lattice_basis,
    map_kernel_cokernel,
    presentation_group,
    smith_normal_form,
    solve_in_lattice,
    verify_snf,
)


def test_snf_small_examples():
    a = Mat(2, 2, [[2, 4], [6, 8]])
    s = smith_normal_form(a)
    assert verify_snf(a, s)
    assert s.diagonal() == [2, 4]

    a = Mat(2, 3, [[1, 2, 3], [4, 5, 6]])
    s = smith_normal_form(a)
    assert verify_snf(a, s)
    assert s.diagonal() == [1, 3]


def test_snf_random_matrices():
    rng = random.Random(7)
    for _ in range(120):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        a = Mat(m, n, [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        s = smith_normal_form(a)
        assert verify_snf(a, s), (a, s.diagonal())


def test_kernel_basis():
    # x + y + z = 0 over Z
    a = Mat(1, 3, [[1, 1, 1]])
    kb = kernel_basis(a)
    assert len(kb) == 2
    for v in kb:
        assert sum(v) == 0
    # multiplication by 2 has trivial integer kernel
    assert kernel_basis(Mat(1, 1, [[2]])) == []


def test_lattice_and_solve():
    basis = lattice_basis([[2, 0], [0, 3], [2, 3]], 2)
    assert len(basis) == 2
    assert solve_in_lattice(basis, [4, 3], 2) is not None
    assert solve_in_lattice(basis, [1, 0], 2) is None
    u = Mat(2, 2, [[1, 1], [0, 1]])
    assert invert_unimodular(u).rows == [[1, -1], [0, 1]]


def test_presentation_group():
    assert presentation_group(1, [[2]]) == AbGroup(torsion=(2,), rank=0)
    assert presentation_group(2, [[2, 0], [0, 4]]) == AbGroup(torsion=(2, 4), rank=0)
    assert presentation_group(2, [[0, 0]]) == AbGroup(torsion=(), rank=2)
    # Z^2 / <(2,0),(0,2),(1,1)> = Z/2
    assert presentation_group(2, [[2, 0], [0, 2], [1, 1]]) == AbGroup(torsion=(2,), rank=0)


def test_kernel_cokernel_mul2_on_z8():
    # multiplication by 2 on Z/8: ker = Z/2, coker = Z/2
    src = PresentedModule.mod_q(1, 8)
    tgt = PresentedModule.mod_q(1, 8)
    ker, coker = map_kernel_cokernel(Mat(1, 1, [[2]]), src, tgt)
    assert ker.group() == AbGroup(torsion=(2,), rank=0)
    assert coker.group() == AbGroup(torsion=(2,), rank=0)


def test_kernel_cokernel_zero_map_on_z():
    src = PresentedModule.free(1)
    tgt = PresentedModule.free(1)
    ker, coker = map_kernel_cokernel(Mat(1, 1, [[0]]), src, tgt)
    assert ker.group() == AbGroup(torsion=(), rank=1)
    assert coker.group() == AbGroup(torsion=(), rank=1)


def test_kernel_cokernel_vs_brute_force():
    rng = random.Random(11)
    for _ in range(60):
        n_s = rng.randint(1, 3)
        n_t = rng.randint(1, 3)
        q_s = rng.choice([2, 4, 8])
        q_t = rng.choice([2, 4, 8])
        src = PresentedModule.mod_q(n_s, q_s)
        tgt = PresentedModule.mod_q(n_t, q_t)
        # build a map that respects relations: entries scaled so q_s * f e_i = 0 mod q_t
        f = Mat(n_t, n_s)
        for i in range(n_t):
            for j in range(n_s):
                scale = max(1, q_t // q_s)
                f.rows[i][j] = scale * rng.randint(0, q_s - 1)
        ker, coker = map_kernel_cokernel(f, src, tgt)
        bk, bc = brute_force_kernel_cokernel(f, src, tgt)
        assert ker.group().order == bk
        assert coker.group().order == bc


def test_f2_helpers():
    # rows of [[1,1,0],[0,1,1]] as bitmasks (bit j = column j)
    rows = [0b011, 0b110]
    assert f2_rank(rows) == 2
    ker = f2_kernel(rows, 3)
    assert len(ker) == 1
    assert ker[0] == 0b111

    rref, piv = fp_rref([[1, 2], [2, 4]], 5)
    assert piv == [0]
    assert rref == [[1, 2]]
