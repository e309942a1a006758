#include "hermgenus/zmat.hpp"

#include <algorithm>

namespace hermgenus {

namespace {

std::vector<int> default_order(std::size_t n, const std::vector<int>& col_order) {
    if (!col_order.empty()) return col_order;
    std::vector<int> o(n);
    for (std::size_t j = 0; j < n; ++j) o[j] = (int)j;
    return o;
}

bool row_is_zero(const ZRow& r) {
    for (const auto& x : r)
        if (x != 0) return false;
    return true;
}

/* Row echelon over Z with full reduction.  Pivoting happens on the first
 * `ncols_main` columns only (in the given order); the remaining columns ride
 * along, which lets callers carry a transform.  Rows that are zero on the
 * main columns are returned separately. */
void hnf_core(ZMat work, std::size_t ncols_main, const std::vector<int>& order,
              ZMat& result, ZMat& zero_rows) {
    result.clear();
    zero_rows.clear();
    std::vector<int> pivot_col;

    auto main_zero = [&](const ZRow& r) {
        for (std::size_t j = 0; j < ncols_main; ++j)
            if (r[j] != 0) return false;
        return true;
    };

    for (int j : order) {
        // Euclid on column j until at most one work row is nonzero there
        while (true) {
            int best = -1;
            int cnt = 0;
            for (std::size_t i = 0; i < work.size(); ++i) {
                if (work[i][j] == 0) continue;
                ++cnt;
                if (best < 0 || abs_int(work[i][j]) < abs_int(work[best][j])) best = (int)i;
            }
            if (cnt <= 1) {
                if (cnt == 1) {
                    ZRow piv = work[best];
                    work.erase(work.begin() + best);
                    if (piv[j] < 0)
                        for (auto& x : piv) x = -x;
                    result.push_back(std::move(piv));
                    pivot_col.push_back(j);
                }
                break;
            }
            for (std::size_t i = 0; i < work.size(); ++i) {
                if ((int)i == best || work[i][j] == 0) continue;
                Int q = fdiv(work[i][j], work[best][j]);
                if (q == 0) continue;
                for (std::size_t c = 0; c < work[i].size(); ++c)
                    work[i][c] -= q * work[best][c];
            }
            // rows can only lose their col-j entry; loop shrinks |values|
        }
    }
    for (auto& r : work) {
        if (!main_zero(r)) throw verification_error("hnf_core: unprocessed nonzero column");
        zero_rows.push_back(std::move(r));
    }

    // full reduction: for pivot t, reduce all earlier rows at its pivot column
    for (std::size_t t = 0; t < result.size(); ++t) {
        int j = pivot_col[t];
        for (std::size_t s = 0; s < t; ++s) {
            Int q = fdiv(result[s][j], result[t][j]);
            if (q == 0) continue;
            for (std::size_t c = 0; c < result[s].size(); ++c)
                result[s][c] -= q * result[t][c];
        }
    }
}

} // namespace

ZMat hnf_rows(ZMat rows, const std::vector<int>& col_order) {
    if (rows.empty()) return {};
    std::size_t n = rows[0].size();
    auto order = default_order(n, col_order);
    ZMat result, zeros;
    hnf_core(std::move(rows), n, order, result, zeros);
    return result;
}

std::vector<int> hnf_pivots(const ZMat& H, const std::vector<int>& col_order) {
    std::vector<int> piv;
    if (H.empty()) return piv;
    auto order = default_order(H[0].size(), col_order);
    for (const auto& row : H) {
        for (int j : order) {
            if (row[j] != 0) {
                piv.push_back(j);
                break;
            }
        }
    }
    return piv;
}

ZMat hnf_rows_with_transform(const ZMat& rows, ZMat& U, const std::vector<int>& col_order) {
    U.clear();
    if (rows.empty()) return {};
    std::size_t m = rows.size(), n = rows[0].size();
    auto order = default_order(n, col_order);
    ZMat aug(m, ZRow(n + m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = rows[i][j];
        aug[i][n + i] = 1;
    }
    ZMat result, zeros;
    hnf_core(std::move(aug), n, order, result, zeros);
    ZMat H;
    for (auto& r : result) {
        H.emplace_back(r.begin(), r.begin() + n);
        U.emplace_back(r.begin() + n, r.end());
    }
    return H;
}

ZMat left_kernel(const ZMat& M) {
    if (M.empty()) return {};
    std::size_t m = M.size(), n = M[0].size();
    auto order = default_order(n, {});
    ZMat aug(m, ZRow(n + m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = M[i][j];
        aug[i][n + i] = 1;
    }
    ZMat result, zeros;
    hnf_core(std::move(aug), n, order, result, zeros);
    ZMat ker;
    for (auto& r : zeros) ker.emplace_back(r.begin() + n, r.end());
    return hnf_rows(std::move(ker));
}

std::optional<ZRow> solve_in_rowspan(const ZMat& H, const ZRow& v,
                                     const std::vector<int>& col_order) {
    ZRow coeffs(H.size(), 0);
    if (H.empty()) {
        if (row_is_zero(v)) return coeffs;
        return std::nullopt;
    }
    auto piv = hnf_pivots(H, col_order);
    ZRow w = v;
    for (std::size_t t = 0; t < H.size(); ++t) {
        int j = piv[t];
        if (w[j] == 0) continue;
        if (!mpz_divisible_p(w[j].get_mpz_t(), H[t][j].get_mpz_t())) return std::nullopt;
        Int q = w[j] / H[t][j];
        coeffs[t] = q;
        for (std::size_t c = 0; c < w.size(); ++c) w[c] -= q * H[t][c];
    }
    if (!row_is_zero(w)) return std::nullopt;
    return coeffs;
}

std::vector<Int> smith_normal_form(ZMat A, ZMat& V) {
    std::size_t m = A.size();
    std::size_t n = m ? A[0].size() : 0;
    V = identity_mat(n);
    std::size_t k = std::min(m, n);
    std::vector<Int> diag;

    auto col_op_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t i = 0; i < m; ++i) A[i][dst] -= q * A[i][src];
        for (std::size_t i = 0; i < n; ++i) V[i][dst] -= q * V[i][src];
    };
    auto col_swap = [&](std::size_t c1, std::size_t c2) {
        for (std::size_t i = 0; i < m; ++i) std::swap(A[i][c1], A[i][c2]);
        for (std::size_t i = 0; i < n; ++i) std::swap(V[i][c1], V[i][c2]);
    };

    for (std::size_t t = 0; t < k; ++t) {
        while (true) {
            // minimal nonzero entry of the trailing block to (t, t)
            long bi = -1, bj = -1;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (A[i][j] != 0 &&
                        (bi < 0 || abs_int(A[i][j]) < abs_int(A[bi][bj]))) {
                        bi = (long)i;
                        bj = (long)j;
                    }
            if (bi < 0) break;
            if ((std::size_t)bi != t) std::swap(A[bi], A[t]);
            if ((std::size_t)bj != t) col_swap(bj, t);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (A[i][t] == 0) continue;
                Int q = fdiv(A[i][t], A[t][t]);
                for (std::size_t j = 0; j < n; ++j) A[i][j] -= q * A[t][j];
                if (A[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (A[t][j] == 0) continue;
                Int q = fdiv(A[t][j], A[t][t]);
                col_op_sub(j, t, q);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility of the remaining block by the pivot
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n && !fixed; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        for (std::size_t c = 0; c < n; ++c) A[t][c] += A[i][c];
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (A[t][t] < 0)
            for (std::size_t j = 0; j < n; ++j) A[t][j] = -A[t][j];
        diag.push_back(A[t][t]);
    }
    return diag;
}

Int lattice_det(const ZMat& rows) {
    ZMat H = hnf_rows(rows);
    if (H.empty() || H.size() != rows[0].size()) return 0;
    auto piv = hnf_pivots(H);
    Int det = 1;
    for (std::size_t t = 0; t < H.size(); ++t) det *= H[t][piv[t]];
    return det;
}

ZMat identity_mat(std::size_t n) {
    ZMat I(n, ZRow(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

} // namespace hermgenus
