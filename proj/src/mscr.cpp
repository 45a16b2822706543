#include "crgn/mscr.hpp"

#include <algorithm>
#include <string>

#include "crgn/errors.hpp"

namespace crgn {

namespace {

Matrix default_p(const PrimeField& field, std::size_t k) {
    if (field.modulus() == 11 && k == 4) {
        return Matrix::from_rows(field, {{1, 4, 9, 8}, {10, 1, 4, 9}, {7, 10, 1, 4}, {2, 7, 10, 1}});
    }
    if (field.modulus() < 2 * k + 1) {
        throw FieldTooSmallError("field size " + std::to_string(field.modulus()) +
                                 " too small for a " + std::to_string(k) + "x" + std::to_string(k) +
                                 " Cauchy matrix");
    }
    std::vector<Fp> a_pts, b_pts;
    for (std::size_t i = 1; i <= k; ++i) {
        a_pts.push_back(field.element(static_cast<std::int64_t>(2 * i)));
        b_pts.push_back(field.element(static_cast<std::int64_t>(2 * i - 1)));
    }
    return cauchy(field, a_pts, b_pts);
}

void check_column(const MscrCodebook& cb, const std::vector<Fp>& column, std::size_t node) {
    if (column.size() != cb.k()) {
        throw InconsistentShardError("node " + std::to_string(node) + " column has " +
                                     std::to_string(column.size()) + " symbols, expected " + std::to_string(cb.k()));
    }
    for (const Fp& s : column) {
        if (s.modulus() != cb.field.modulus()) throw FieldMismatchError("column symbol field mismatch");
    }
}

// left-multiplies a row vector: returns r * m
std::vector<Fp> row_times(const std::vector<Fp>& r, const Matrix& m) {
    return (Matrix::row_vector(r) * m).row(0);
}

} // namespace

MscrSurvivors mscr_survivors(const MscrState& state, const std::set<std::size_t>& failed) {
    std::size_t k = state.x.cols();
    MscrSurvivors out;
    for (std::size_t node = 1; node <= 2 * k; ++node) {
        if (failed.count(node)) continue;
        out.columns.emplace(node, node <= k ? state.x.col(node - 1) : state.y.col(node - k - 1));
    }
    return out;
}

MscrCodebook mscr_build(const PrimeField& field, std::size_t k, std::size_t t,
                        std::optional<Matrix> u_opt, std::optional<Matrix> p_opt,
                        std::optional<Fp> a_opt, std::optional<Fp> e_opt) {
    if (k < 1 || t < 1 || t > k) {
        throw ParamsOutOfRangeError("need 1 <= t <= k, got k=" + std::to_string(k) + " t=" + std::to_string(t));
    }
    Matrix u = u_opt ? *u_opt : Matrix::identity(field, k);
    if (u.rows() != k || u.cols() != k) throw DimensionMismatchError("U must be k x k");
    if (u.field() != field) throw FieldMismatchError("U field differs");
    if (!is_nonsingular(u)) throw SingularUError("U is singular");

    Matrix p = p_opt ? *p_opt : default_p(field, k);
    if (p.rows() != k || p.cols() != k) throw DimensionMismatchError("P must be k x k");
    if (p.field() != field) throw FieldMismatchError("P field differs");
    if (k <= 8 && !is_superregular(p)) throw NotSuperRegularError("P has a singular square submatrix");

    Fp a = a_opt ? *a_opt : field.element(2);
    Fp e = e_opt ? *e_opt : field.element(1);
    if (a.modulus() != field.modulus() || e.modulus() != field.modulus()) {
        throw FieldMismatchError("scalar field differs");
    }
    if (a.is_zero() || e.is_zero() || a * a == e * e) {
        throw BadScalarsError("need a, e and a^2 - e^2 all nonzero");
    }
    Fp det = a * a - e * e;
    Fp b = a / det;
    Fp f = -(e / det);

    Matrix q = inverse(p);
    Matrix v = u * p;
    Matrix uhat = transpose(inverse(u));
    Matrix vhat = transpose(inverse(v));

    CodeParams params(k * k, 2 * k, k, 2 * k - t, t);
    return MscrCodebook{params, field, std::move(u), std::move(p), std::move(q), std::move(v),
                        std::move(uhat), std::move(vhat), a, e, b, f};
}

MscrState mscr_encode(const MscrCodebook& cb, const std::vector<Fp>& source) {
    std::size_t k = cb.k();
    if (source.size() != k * k) {
        throw WrongLengthError("source has " + std::to_string(source.size()) + " symbols, expected " +
                               std::to_string(k * k));
    }
    Matrix x(cb.field, k, k);
    for (std::size_t node = 1; node <= k; ++node) {
        for (std::size_t r = 0; r < k; ++r) {
            Fp s = source[(node - 1) * k + r];
            if (s.modulus() != cb.field.modulus()) throw FieldMismatchError("source symbol field mismatch");
            x.set(r, node - 1, s);
        }
    }
    Matrix y = cb.a * (cb.uhat * transpose(x) * cb.v) + cb.e * (x * cb.p);
    return MscrState{std::move(x), std::move(y)};
}

Matrix mscr_encode_dual(const MscrCodebook& cb, const Matrix& y) {
    if (y.rows() != cb.k() || y.cols() != cb.k()) throw DimensionMismatchError("Y must be k x k");
    return cb.b * (cb.vhat * transpose(y) * cb.u) + cb.f * (y * cb.q);
}

std::pair<std::map<std::size_t, std::vector<Fp>>, RepairTranscript> mscr_repair_systematic(
    const MscrCodebook& cb, const std::set<std::size_t>& failed, const MscrSurvivors& survivors) {
    std::size_t k = cb.k();
    std::size_t t = failed.size();
    if (t == 0) throw BadFailureSetError("empty failure set");
    if (t > k) throw TooManyFailuresError("at most k=" + std::to_string(k) + " nodes can be rebuilt together");
    for (std::size_t node : failed) {
        if (node < 1 || node > k) {
            throw BadFailureSetError("node " + std::to_string(node) + " is not a systematic node");
        }
    }
    for (std::size_t node = 1; node <= 2 * k; ++node) {
        if (failed.count(node)) continue;
        auto it = survivors.columns.find(node);
        if (it == survivors.columns.end()) {
            throw BadFailureSetError("surviving node " + std::to_string(node) + " has no column");
        }
        check_column(cb, it->second, node);
    }

    RepairTranscript transcript;
    std::vector<std::size_t> fresh(failed.begin(), failed.end());

    // phase 1: each survivor projects its column onto u_i and sends the
    // scalar to new node i
    std::map<std::size_t, std::vector<Fp>> sys_recv;    // new node -> u_i^T x_m keyed by order of m
    std::map<std::size_t, std::vector<std::size_t>> sys_from;
    std::map<std::size_t, std::vector<Fp>> par_recv;    // new node -> u_i^T y_j, j = 1..k
    for (std::size_t i : fresh) {
        sys_recv[i];
        sys_from[i]; // may stay empty when every systematic node failed
        std::vector<Fp> u_i = cb.u_col(i);
        for (std::size_t m = 1; m <= k; ++m) {
            if (failed.count(m)) continue;
            Fp s = dot(u_i, survivors.columns.at(m));
            transcript.entries.push_back({1, m, i, {s}, {}});
            sys_recv[i].push_back(s);
            sys_from[i].push_back(m);
        }
        for (std::size_t j = 1; j <= k; ++j) {
            Fp s = dot(u_i, survivors.columns.at(k + j));
            transcript.entries.push_back({1, k + j, i, {s}, {}});
            par_recv[i].push_back(s);
        }
    }

    // node i turns the parity row (u_i^T y_j)_j into w = (u_i^T z_nu)_nu via
    // Q, where Z = Y Q; the identity u_i^T x_m = b u_m^T z_i + f u_i^T z_m
    // then unpacks each systematic symbol into a projection of z_i
    std::map<std::size_t, std::vector<Fp>> w_of;                  // new node -> w
    std::map<std::size_t, std::map<std::size_t, Fp>> z_proj;      // new node -> {nu -> u_nu^T z_i}
    for (std::size_t i : fresh) {
        std::vector<Fp> w = row_times(par_recv.at(i), cb.q);
        for (std::size_t idx = 0; idx < sys_from.at(i).size(); ++idx) {
            std::size_t m = sys_from.at(i)[idx];
            Fp derived = (sys_recv.at(i)[idx] - cb.f * w[m - 1]) / cb.b;
            z_proj[i].emplace(m, derived);
        }
        z_proj[i].emplace(i, w[i - 1]);
        w_of.emplace(i, std::move(w));
    }

    // phase 2: new nodes exchange projections of each other's z columns
    for (std::size_t i : fresh) {
        for (std::size_t other : fresh) {
            if (other == i) continue;
            Fp s = w_of.at(i)[other - 1]; // u_i^T z_other
            transcript.entries.push_back({2, i, other, {s}, {}});
            z_proj[other].emplace(i, s);
        }
    }

    // full set of projections u_nu^T z_i for nu = 1..k: solve for z_i, then
    // x_i = b * Uhat * w + f * z_i
    std::map<std::size_t, std::vector<Fp>> rebuilt;
    for (std::size_t i : fresh) {
        Matrix rhs(cb.field, k, 1);
        for (std::size_t nu = 1; nu <= k; ++nu) rhs.set(nu - 1, 0, z_proj.at(i).at(nu));
        Matrix z_i = solve_left(transpose(cb.u), rhs);
        Matrix w_col = Matrix::column_vector(w_of.at(i));
        Matrix x_i = cb.b * (cb.uhat * w_col) + cb.f * z_i;
        rebuilt.emplace(i, x_i.col(0));
    }
    return {std::move(rebuilt), std::move(transcript)};
}

std::pair<std::map<std::size_t, std::vector<Fp>>, RepairTranscript> mscr_repair_parity(
    const MscrCodebook& cb, const std::set<std::size_t>& failed, const MscrSurvivors& survivors) {
    std::size_t k = cb.k();
    std::size_t t = failed.size();
    if (t == 0) throw BadFailureSetError("empty failure set");
    if (t > k) throw TooManyFailuresError("at most k=" + std::to_string(k) + " nodes can be rebuilt together");
    for (std::size_t node : failed) {
        if (node <= k || node > 2 * k) {
            throw BadFailureSetError("node " + std::to_string(node) + " is not a parity node");
        }
    }
    for (std::size_t node = 1; node <= 2 * k; ++node) {
        if (failed.count(node)) continue;
        auto it = survivors.columns.find(node);
        if (it == survivors.columns.end()) {
            throw BadFailureSetError("surviving node " + std::to_string(node) + " has no column");
        }
        check_column(cb, it->second, node);
    }

    RepairTranscript transcript;
    std::vector<std::size_t> fresh(failed.begin(), failed.end());

    // dual change of variables Z' = X P gives Y = a*Vhat*Z'^T*V + e*Z'; the
    // roles of (U, Q, b, f) are played by (V, P, a, e)
    std::map<std::size_t, std::vector<Fp>> sys_recv; // new node -> v_j^T x_m, m = 1..k
    std::map<std::size_t, std::vector<Fp>> par_recv; // new node -> v_j^T y_m keyed by order
    std::map<std::size_t, std::vector<std::size_t>> par_from;
    for (std::size_t node : fresh) {
        par_recv[node];
        par_from[node]; // may stay empty when every parity node failed
        std::size_t j = node - k;
        std::vector<Fp> v_j = cb.v_col(j);
        for (std::size_t m = 1; m <= k; ++m) {
            Fp s = dot(v_j, survivors.columns.at(m));
            transcript.entries.push_back({1, m, node, {s}, {}});
            sys_recv[node].push_back(s);
        }
        for (std::size_t m = 1; m <= k; ++m) {
            if (failed.count(k + m)) continue;
            Fp s = dot(v_j, survivors.columns.at(k + m));
            transcript.entries.push_back({1, k + m, node, {s}, {}});
            par_recv[node].push_back(s);
            par_from[node].push_back(m);
        }
    }

    std::map<std::size_t, std::vector<Fp>> w_of;             // new node -> (v_j^T z'_nu)_nu
    std::map<std::size_t, std::map<std::size_t, Fp>> z_proj; // new node -> {nu -> v_nu^T z'_j}
    for (std::size_t node : fresh) {
        std::size_t j = node - k;
        std::vector<Fp> w = row_times(sys_recv.at(node), cb.p);
        for (std::size_t idx = 0; idx < par_from.at(node).size(); ++idx) {
            std::size_t m = par_from.at(node)[idx];
            Fp derived = (par_recv.at(node)[idx] - cb.e * w[m - 1]) / cb.a;
            z_proj[node].emplace(m, derived);
        }
        z_proj[node].emplace(j, w[j - 1]);
        w_of.emplace(node, std::move(w));
    }

    for (std::size_t node : fresh) {
        for (std::size_t other : fresh) {
            if (other == node) continue;
            Fp s = w_of.at(node)[other - k - 1]; // v_j^T z'_other
            transcript.entries.push_back({2, node, other, {s}, {}});
            z_proj[other].emplace(node - k, s);
        }
    }

    std::map<std::size_t, std::vector<Fp>> rebuilt;
    for (std::size_t node : fresh) {
        Matrix rhs(cb.field, k, 1);
        for (std::size_t nu = 1; nu <= k; ++nu) rhs.set(nu - 1, 0, z_proj.at(node).at(nu));
        Matrix zp_j = solve_left(transpose(cb.v), rhs);
        Matrix w_col = Matrix::column_vector(w_of.at(node));
        Matrix y_j = cb.a * (cb.vhat * w_col) + cb.e * zp_j;
        rebuilt.emplace(node, y_j.col(0));
    }
    return {std::move(rebuilt), std::move(transcript)};
}

std::pair<std::map<std::size_t, std::vector<Fp>>, RepairTranscript> mscr_repair(
    const MscrCodebook& cb, const std::set<std::size_t>& failed, const MscrSurvivors& survivors) {
    std::size_t k = cb.k();
    bool any_sys = false, any_par = false;
    for (std::size_t node : failed) {
        (node <= k ? any_sys : any_par) = true;
    }
    if (any_sys && any_par) {
        throw MixedFailureUnsupportedError("cannot repair systematic and parity nodes in one session");
    }
    return any_par ? mscr_repair_parity(cb, failed, survivors) : mscr_repair_systematic(cb, failed, survivors);
}

std::vector<Fp> mscr_decode(const MscrCodebook& cb, const std::vector<MscrShardColumn>& shards) {
    std::size_t k = cb.k();
    if (shards.size() < k) {
        throw NotEnoughShardsError("decode needs k=" + std::to_string(k) + " columns, got " +
                                   std::to_string(shards.size()));
    }
    std::set<std::size_t> seen;
    for (const MscrShardColumn& s : shards) {
        if (s.node_index < 1 || s.node_index > 2 * k) {
            throw InconsistentShardError("node index " + std::to_string(s.node_index) + " out of 1.." +
                                         std::to_string(2 * k));
        }
        if (!seen.insert(s.node_index).second) {
            throw DuplicateShardError("duplicate column for node " + std::to_string(s.node_index));
        }
        check_column(cb, s.column, s.node_index);
    }

    std::vector<const MscrShardColumn*> picked;
    for (std::size_t i = 0; i < k; ++i) picked.push_back(&shards[i]);

    Matrix x(cb.field, k, k);
    std::vector<std::size_t> known, missing, parity_j;
    std::vector<const MscrShardColumn*> parity_cols;
    std::set<std::size_t> have_sys;
    for (const MscrShardColumn* s : picked) {
        if (s->node_index <= k) {
            have_sys.insert(s->node_index);
            for (std::size_t r = 0; r < k; ++r) x.set(r, s->node_index - 1, s->column[r]);
        } else {
            parity_j.push_back(s->node_index - k);
            parity_cols.push_back(s);
        }
    }
    for (std::size_t i = 1; i <= k; ++i) {
        (have_sys.count(i) ? known : missing).push_back(i);
    }
    std::size_t s_cnt = missing.size();
    if (s_cnt == 0) {
        std::vector<Fp> out;
        for (std::size_t node = 1; node <= k; ++node) {
            std::vector<Fp> col = x.col(node - 1);
            out.insert(out.end(), col.begin(), col.end());
        }
        return out;
    }

    // With J the parity indices in hand, Upsilon = Y[:,J] and pi = P[:,J]
    // satisfy U^T Upsilon = a G^T pi + e G pi for G = U^T X. Subtracting the
    // known columns' contribution leaves the unknown block W = G[:,missing]:
    //   R = a W^T restricted + e W pi1  (pi1 = pi[missing,:], pi2 = pi[known,:])
    Matrix upsilon(cb.field, k, s_cnt);
    Matrix pi(cb.field, k, s_cnt);
    for (std::size_t c = 0; c < s_cnt; ++c) {
        for (std::size_t r = 0; r < k; ++r) {
            upsilon.set(r, c, parity_cols[c]->column[r]);
            pi.set(r, c, cb.p.at(r, parity_j[c] - 1));
        }
    }
    Matrix g_known = transpose(cb.u) * x; // unknown columns are zero in x
    Matrix r_mat = transpose(cb.u) * upsilon - cb.a * (transpose(g_known) * pi) - cb.e * (g_known * pi);

    std::vector<std::size_t> missing0, known0;
    for (std::size_t i : missing) missing0.push_back(i - 1);
    for (std::size_t i : known) known0.push_back(i - 1);
    Matrix pi1 = pi.select_rows(missing0); // s x s, nonsingular by super-regularity
    Matrix pi1_inv = inverse(pi1);

    Matrix w(cb.field, k, s_cnt);
    Matrix t_mat = r_mat.select_rows(missing0);
    if (!known0.empty()) {
        Matrix pi2 = pi.select_rows(known0);
        Matrix w2 = (cb.e.inv() * r_mat.select_rows(known0)) * pi1_inv;
        for (std::size_t r = 0; r < known0.size(); ++r) {
            for (std::size_t c = 0; c < s_cnt; ++c) w.set(known0[r], c, w2.at(r, c));
        }
        t_mat = (t_mat - cb.a * (transpose(w2) * pi2)) * pi1_inv;
    } else {
        t_mat = t_mat * pi1_inv;
    }

    // t_mat = a W1^T + e W1: diagonal scaled by a+e, off-diagonal entries in
    // transposed pairs solved from a 2x2 system with determinant e^2 - a^2
    Matrix w1(cb.field, s_cnt, s_cnt);
    Fp sum_inv = (cb.a + cb.e).inv();
    Fp det_inv = (cb.e * cb.e - cb.a * cb.a).inv();
    for (std::size_t i = 0; i < s_cnt; ++i) {
        w1.set(i, i, t_mat.at(i, i) * sum_inv);
        for (std::size_t j = i + 1; j < s_cnt; ++j) {
            w1.set(i, j, (cb.e * t_mat.at(i, j) - cb.a * t_mat.at(j, i)) * det_inv);
            w1.set(j, i, (cb.e * t_mat.at(j, i) - cb.a * t_mat.at(i, j)) * det_inv);
        }
    }
    for (std::size_t r = 0; r < s_cnt; ++r) {
        for (std::size_t c = 0; c < s_cnt; ++c) w.set(missing0[r], c, w1.at(r, c));
    }

    // W = U^T X[:,missing]
    Matrix x_missing = solve_left(transpose(cb.u), w);
    for (std::size_t c = 0; c < s_cnt; ++c) {
        for (std::size_t r = 0; r < k; ++r) x.set(r, missing0[c], x_missing.at(r, c));
    }

    std::vector<Fp> out;
    for (std::size_t node = 1; node <= k; ++node) {
        std::vector<Fp> col = x.col(node - 1);
        out.insert(out.end(), col.begin(), col.end());
    }
    return out;
}

} // namespace crgn
