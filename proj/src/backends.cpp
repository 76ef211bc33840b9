#include "wald/backends.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace wald {

// --- Pointed finite sets ---------------------------------------------------

std::string PSetBackend::name() const {
    return "pset:" + std::to_string(n_max_);
}

BMor PSetBackend::identity(int a) const {
    BMor m{a, a, {}};
    m.data.resize(a);
    for (int i = 0; i < a; ++i) m.data[i] = static_cast<std::uint8_t>(i + 1);
    return m;
}

BMor PSetBackend::compose(const BMor& g, const BMor& f) const {
    assert(f.tgt == g.src);
    BMor m{f.src, g.tgt, {}};
    m.data.resize(f.src);
    for (int i = 0; i < f.src; ++i) {
        const int x = f.data[i];
        m.data[i] = x == 0 ? 0 : g.data[x - 1];
    }
    return m;
}

bool PSetBackend::is_cof(const BMor& m) const {
    // Injective pointed map: no non-base point hits the basepoint or a value
    // already taken.
    std::vector<char> seen(m.tgt + 1, 0);
    for (int i = 0; i < m.src; ++i) {
        const int x = m.data[i];
        if (x == 0 || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

bool PSetBackend::is_we(const BMor& m) const {
    return m.src == m.tgt && is_cof(m);
}

std::vector<BMor> PSetBackend::hom(int a, int b) const {
    std::vector<BMor> out;
    out.reserve(static_cast<std::size_t>(std::pow(b + 1, a)));
    BMor m{a, b, std::vector<std::uint8_t>(a, 0)};
    while (true) {
        out.push_back(m);
        int i = a - 1;
        while (i >= 0 && m.data[i] == b) m.data[i--] = 0;
        if (i < 0) break;
        ++m.data[i];
    }
    return out;
}

BCoproduct PSetBackend::coproduct(const std::vector<int>& objs) const {
    BCoproduct cp;
    cp.apex = std::accumulate(objs.begin(), objs.end(), 0);
    int off = 0;
    for (int k : objs) {
        BMor inj{k, cp.apex, {}};
        inj.data.resize(k);
        for (int i = 0; i < k; ++i)
            inj.data[i] = static_cast<std::uint8_t>(off + i + 1);
        cp.injections.push_back(std::move(inj));
        off += k;
    }
    return cp;
}

BMor PSetBackend::copair(const BCoproduct& cp,
                         const std::vector<BMor>& legs) const {
    assert(legs.size() == cp.injections.size());
    const int tgt = legs.empty() ? 0 : legs[0].tgt;
    BMor m{cp.apex, tgt, std::vector<std::uint8_t>(cp.apex, 0)};
    int off = 0;
    for (const BMor& leg : legs) {
        assert(leg.tgt == tgt);
        for (int i = 0; i < leg.src; ++i) m.data[off + i] = leg.data[i];
        off += leg.src;
    }
    return m;
}

BPushout PSetBackend::pushout(const BMor& f, const BMor& g) const {
    assert(f.src == g.src);
    const int B = f.tgt, C = g.tgt;
    // Union-find over basepoint (node 0), B-points (1..B), C-points (B+1..).
    std::vector<int> parent(1 + B + C);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int a = 0; a < f.src; ++a) {
        const int u = f.data[a] == 0 ? 0 : f.data[a];
        const int v = g.data[a] == 0 ? 0 : B + g.data[a];
        parent[find(u)] = find(v);
    }
    const int base_root = find(0);
    std::vector<int> label(1 + B + C, -1);
    int next = 0;
    auto point = [&](int node) {
        const int r = find(node);
        if (r == base_root) return 0;
        if (label[r] < 0) label[r] = ++next;
        return label[r];
    };
    BPushout po;
    po.from_f = BMor{B, 0, std::vector<std::uint8_t>(B, 0)};
    po.from_g = BMor{C, 0, std::vector<std::uint8_t>(C, 0)};
    for (int i = 1; i <= B; ++i)
        po.from_f.data[i - 1] = static_cast<std::uint8_t>(point(i));
    for (int i = 1; i <= C; ++i)
        po.from_g.data[i - 1] = static_cast<std::uint8_t>(point(B + i));
    po.apex = next;
    po.from_f.tgt = po.from_g.tgt = next;
    return po;
}

BMor PSetBackend::mediate(const BPushout& po, const BMor& qf,
                          const BMor& qg) const {
    assert(qf.tgt == qg.tgt);
    BMor e{po.apex, qf.tgt, std::vector<std::uint8_t>(po.apex, 0)};
    std::vector<char> set(po.apex, 0);
    auto place = [&](int apex_pt, int value) {
        if (apex_pt == 0) {
            if (value != 0)
                throw std::logic_error("pushout cocone not pointed");
            return;
        }
        if (set[apex_pt - 1] && e.data[apex_pt - 1] != value)
            throw std::logic_error("pushout cocone does not commute");
        set[apex_pt - 1] = 1;
        e.data[apex_pt - 1] = static_cast<std::uint8_t>(value);
    };
    for (int i = 0; i < po.from_f.src; ++i)
        place(po.from_f.data[i], qf.data[i]);
    for (int i = 0; i < po.from_g.src; ++i)
        place(po.from_g.data[i], qg.data[i]);
    return e;
}

std::string PSetBackend::encode(const BMor& m) const {
    if (m.src == 0) return "-";
    std::string out;
    for (int i = 0; i < m.src; ++i) {
        if (i) out += ' ';
        out += std::to_string(i + 1);
        out += "->";
        out += m.data[i] == 0 ? "*" : std::to_string(int(m.data[i]));
    }
    return out;
}

std::optional<BMor> PSetBackend::decode(int src, int tgt,
                                        std::string_view text,
                                        std::string* error) const {
    auto fail = [&](const std::string& why) -> std::optional<BMor> {
        if (error) *error = why;
        return std::nullopt;
    };
    BMor m{src, tgt, std::vector<std::uint8_t>(src, 0)};
    if (src == 0) {
        if (text != "-" && !text.empty())
            return fail("expected '-' for an empty table");
        return m;
    }
    std::vector<char> assigned(src, 0);
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size()) break;
        std::size_t arrow = text.find("->", pos);
        if (arrow == std::string_view::npos)
            return fail("expected 'i->j' at offset " + std::to_string(pos));
        int i = 0;
        auto [p1, ec1] =
            std::from_chars(text.data() + pos, text.data() + arrow, i);
        if (ec1 != std::errc{} || p1 != text.data() + arrow)
            return fail("bad source point at offset " + std::to_string(pos));
        pos = arrow + 2;
        int j = 0;
        if (pos < text.size() && text[pos] == '*') {
            ++pos;
        } else {
            std::size_t end = text.find(' ', pos);
            if (end == std::string_view::npos) end = text.size();
            auto [p2, ec2] =
                std::from_chars(text.data() + pos, text.data() + end, j);
            if (ec2 != std::errc{} || p2 != text.data() + end)
                return fail("bad image at offset " + std::to_string(pos));
            pos = end;
        }
        if (i < 1 || i > src) return fail("point out of range: " + std::to_string(i));
        if (j < 0 || j > tgt) return fail("image out of range: " + std::to_string(j));
        if (assigned[i - 1]) return fail("duplicate assignment for point " + std::to_string(i));
        assigned[i - 1] = 1;
        m.data[i - 1] = static_cast<std::uint8_t>(j);
    }
    for (int i = 0; i < src; ++i)
        if (!assigned[i])
            return fail("missing assignment for point " + std::to_string(i + 1));
    return m;
}

// --- F_p vector spaces -----------------------------------------------------

std::string VectBackend::name() const {
    return "vect:" + std::to_string(p_) + ":" + std::to_string(d_max_);
}

BMor VectBackend::identity(int a) const {
    BMor m{a, a, std::vector<std::uint8_t>(static_cast<std::size_t>(a) * a, 0)};
    for (int i = 0; i < a; ++i) m.data[i * a + i] = 1;
    return m;
}

BMor VectBackend::compose(const BMor& g, const BMor& f) const {
    assert(f.tgt == g.src);
    BMor m{f.src, g.tgt,
           std::vector<std::uint8_t>(
               static_cast<std::size_t>(f.src) * g.tgt, 0)};
    for (int r = 0; r < g.tgt; ++r)
        for (int c = 0; c < f.src; ++c) {
            int acc = 0;
            for (int k = 0; k < f.tgt; ++k)
                acc += g.data[r * g.src + k] * f.data[k * f.src + c];
            m.data[r * f.src + c] = static_cast<std::uint8_t>(acc % p_);
        }
    return m;
}

int VectBackend::rank(const BMor& m) const {
    // Gaussian elimination over F_p on a working copy.
    std::vector<int> a(m.data.begin(), m.data.end());
    const int rows = m.tgt, cols = m.src;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r * cols + c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int k = 0; k < cols; ++k)
            std::swap(a[piv * cols + k], a[rank * cols + k]);
        // normalize pivot row
        int inv = 1;
        for (int x = 1; x < p_; ++x)
            if (a[rank * cols + c] * x % p_ == 1) {
                inv = x;
                break;
            }
        for (int k = 0; k < cols; ++k)
            a[rank * cols + k] = a[rank * cols + k] * inv % p_;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r * cols + c] == 0) continue;
            const int factor = a[r * cols + c];
            for (int k = 0; k < cols; ++k)
                a[r * cols + k] =
                    (a[r * cols + k] - factor * a[rank * cols + k] % p_ + p_ * p_) %
                    p_;
        }
        ++rank;
    }
    return rank;
}

bool VectBackend::is_cof(const BMor& m) const { return rank(m) == m.src; }

bool VectBackend::is_we(const BMor& m) const {
    return m.src == m.tgt && rank(m) == m.src;
}

std::vector<BMor> VectBackend::hom(int a, int b) const {
    std::vector<BMor> out;
    BMor m{a, b, std::vector<std::uint8_t>(static_cast<std::size_t>(a) * b, 0)};
    const std::size_t n = m.data.size();
    while (true) {
        out.push_back(m);
        std::size_t i = n;
        while (i > 0 && m.data[i - 1] == p_ - 1) m.data[--i] = 0;
        if (i == 0) break;
        ++m.data[i - 1];
    }
    return out;
}

BCoproduct VectBackend::coproduct(const std::vector<int>& objs) const {
    BCoproduct cp;
    cp.apex = std::accumulate(objs.begin(), objs.end(), 0);
    int off = 0;
    for (int k : objs) {
        BMor inj{k, cp.apex,
                 std::vector<std::uint8_t>(
                     static_cast<std::size_t>(k) * cp.apex, 0)};
        for (int i = 0; i < k; ++i) inj.data[(off + i) * k + i] = 1;
        cp.injections.push_back(std::move(inj));
        off += k;
    }
    return cp;
}

BMor VectBackend::copair(const BCoproduct& cp,
                         const std::vector<BMor>& legs) const {
    const int tgt = legs.empty() ? 0 : legs[0].tgt;
    BMor m{cp.apex, tgt,
           std::vector<std::uint8_t>(
               static_cast<std::size_t>(cp.apex) * tgt, 0)};
    int off = 0;
    for (const BMor& leg : legs) {
        assert(leg.tgt == tgt);
        for (int r = 0; r < tgt; ++r)
            for (int c = 0; c < leg.src; ++c)
                m.data[r * cp.apex + off + c] = leg.data[r * leg.src + c];
        off += leg.src;
    }
    return m;
}

BPushout VectBackend::pushout(const BMor& f, const BMor& g) const {
    assert(f.src == g.src);
    const int A = f.src, B = f.tgt, C = g.tgt;
    const int n = B + C;
    // Row space of the transpose of the stacked map (f; -g) : A -> B (+) C.
    std::vector<int> rowsp(static_cast<std::size_t>(A) * n, 0);
    for (int a = 0; a < A; ++a) {
        for (int r = 0; r < B; ++r) rowsp[a * n + r] = f.data[r * A + a];
        for (int r = 0; r < C; ++r)
            rowsp[a * n + B + r] = (p_ - g.data[r * A + a]) % p_;
    }
    // Reduced row echelon form.
    std::vector<int> pivots;
    int rank = 0;
    for (int c = 0; c < n && rank < A; ++c) {
        int piv = -1;
        for (int r = rank; r < A; ++r)
            if (rowsp[r * n + c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int k = 0; k < n; ++k)
            std::swap(rowsp[piv * n + k], rowsp[rank * n + k]);
        int inv = 1;
        for (int x = 1; x < p_; ++x)
            if (rowsp[rank * n + c] * x % p_ == 1) {
                inv = x;
                break;
            }
        for (int k = 0; k < n; ++k)
            rowsp[rank * n + k] = rowsp[rank * n + k] * inv % p_;
        for (int r = 0; r < A; ++r) {
            if (r == rank || rowsp[r * n + c] == 0) continue;
            const int factor = rowsp[r * n + c];
            for (int k = 0; k < n; ++k)
                rowsp[r * n + k] =
                    (rowsp[r * n + k] - factor * rowsp[rank * n + k] % p_ +
                     p_ * p_) %
                    p_;
        }
        pivots.push_back(c);
        ++rank;
    }
    // Quotient by the span: coordinates at non-pivot indices after
    // eliminating pivot coordinates with the rref rows.
    std::vector<int> nonpiv;
    {
        std::vector<char> is_piv(n, 0);
        for (int c : pivots) is_piv[c] = 1;
        for (int c = 0; c < n; ++c)
            if (!is_piv[c]) nonpiv.push_back(c);
    }
    const int q = static_cast<int>(nonpiv.size());
    // Projection matrix Q : n -> q.
    std::vector<int> Q(static_cast<std::size_t>(q) * n, 0);
    for (int t = 0; t < q; ++t) Q[t * n + nonpiv[t]] = 1;
    for (int i = 0; i < rank; ++i)
        for (int t = 0; t < q; ++t)
            Q[t * n + pivots[i]] =
                (p_ - rowsp[i * n + nonpiv[t]]) % p_;

    BPushout po;
    po.apex = q;
    po.from_f = BMor{B, q, std::vector<std::uint8_t>(
                               static_cast<std::size_t>(B) * q, 0)};
    po.from_g = BMor{C, q, std::vector<std::uint8_t>(
                               static_cast<std::size_t>(C) * q, 0)};
    for (int t = 0; t < q; ++t) {
        for (int c = 0; c < B; ++c)
            po.from_f.data[t * B + c] = static_cast<std::uint8_t>(Q[t * n + c]);
        for (int c = 0; c < C; ++c)
            po.from_g.data[t * C + c] =
                static_cast<std::uint8_t>(Q[t * n + B + c]);
    }
    return po;
}

BMor VectBackend::mediate(const BPushout& po, const BMor& qf,
                          const BMor& qg) const {
    assert(qf.tgt == qg.tgt);
    const int B = qf.src, C = qg.src, T = qf.tgt, q = po.apex;
    // A section of the projection: for each quotient coordinate t there is a
    // coordinate j(t) in B (+) C that Q maps to the unit vector e_t; recover
    // it by looking for the unit column in the legs.
    BMor e{q, T, std::vector<std::uint8_t>(static_cast<std::size_t>(q) * T, 0)};
    for (int t = 0; t < q; ++t) {
        int found = -1;
        bool in_b = true;
        for (int c = 0; c < B && found < 0; ++c) {
            bool unit = true;
            for (int r = 0; r < q && unit; ++r)
                unit = po.from_f.data[r * B + c] == (r == t ? 1 : 0);
            if (unit) found = c;
        }
        for (int c = 0; c < C && found < 0; ++c) {
            bool unit = true;
            for (int r = 0; r < q && unit; ++r)
                unit = po.from_g.data[r * C + c] == (r == t ? 1 : 0);
            if (unit) {
                found = c;
                in_b = false;
            }
        }
        if (found < 0)
            throw std::logic_error("pushout legs have no unit column");
        for (int r = 0; r < T; ++r)
            e.data[r * q + t] = in_b ? qf.data[r * B + found]
                                     : qg.data[r * C + found];
    }
    return e;
}

std::string VectBackend::encode(const BMor& m) const {
    if (m.src == 0 || m.tgt == 0) return "-";
    std::string out;
    for (int r = 0; r < m.tgt; ++r) {
        if (r) out += " / ";
        for (int c = 0; c < m.src; ++c) {
            if (c) out += ' ';
            out += std::to_string(int(m.data[r * m.src + c]));
        }
    }
    return out;
}

std::optional<BMor> VectBackend::decode(int src, int tgt,
                                        std::string_view text,
                                        std::string* error) const {
    auto fail = [&](const std::string& why) -> std::optional<BMor> {
        if (error) *error = why;
        return std::nullopt;
    };
    BMor m{src, tgt,
           std::vector<std::uint8_t>(static_cast<std::size_t>(src) * tgt, 0)};
    if (src == 0 || tgt == 0) {
        if (text != "-" && !text.empty())
            return fail("expected '-' for an empty matrix");
        return m;
    }
    int r = 0, c = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size()) break;
        if (text[pos] == '/') {
            if (c != src) return fail("short row " + std::to_string(r + 1));
            ++r;
            c = 0;
            ++pos;
            continue;
        }
        int v = 0;
        std::size_t end = pos;
        while (end < text.size() && text[end] != ' ' && text[end] != '/') ++end;
        auto [p1, ec] = std::from_chars(text.data() + pos, text.data() + end, v);
        if (ec != std::errc{} || p1 != text.data() + end)
            return fail("bad entry at offset " + std::to_string(pos));
        if (v < 0 || v >= p_) return fail("entry out of F_p range");
        if (r >= tgt || c >= src) return fail("too many entries");
        m.data[r * src + c] = static_cast<std::uint8_t>(v);
        ++c;
        pos = end;
    }
    if (r != tgt - 1 || c != src)
        return fail("matrix has wrong shape");
    return m;
}

// --- Materialization -------------------------------------------------------

BackendCategory materialize(std::shared_ptr<const Backend> backend) {
    BackendCategory out;
    out.backend = backend;
    const int n = backend->bound();

    FinCategory::Builder b;
    for (int a = 0; a <= n; ++a) b.add_object(std::to_string(a));
    for (int a = 0; a <= n; ++a)
        for (int t = 0; t <= n; ++t)
            for (BMor& m : backend->hom(a, t)) {
                MorId id = b.add_morphism(a, t, backend->encode(m));
                out.mor_id.emplace(m, id);
                out.mor_of.push_back(std::move(m));
            }
    for (int a = 0; a <= n; ++a)
        b.set_identity(a, out.mor_id.at(backend->identity(a)));
    // composition table
    {
        const int n_mor = b.morphism_count();
        std::vector<std::vector<MorId>> by_target(n + 1);
        for (MorId m = 0; m < n_mor; ++m)
            by_target[b.target(m)].push_back(m);
        for (MorId g = 0; g < n_mor; ++g)
            for (MorId f : by_target[b.source(g)])
                b.set_compose(
                    g, f,
                    out.mor_id.at(
                        backend->compose(out.mor_of[g], out.mor_of[f])));
    }
    auto cat = std::move(b).build();
    WaldhausenStructure S(cat);
    S.initial = 0;
    for (MorId m = 0; m < cat->morphism_count(); ++m) {
        if (backend->is_cof(out.mor_of[m])) S.cof.insert(m);
        if (backend->is_we(out.mor_of[m])) S.we.insert(m);
    }
    out.S = std::move(S);
    return out;
}

BackendCategory pset_category(int n_max) {
    return materialize(std::make_shared<PSetBackend>(n_max));
}

BackendCategory vect_category(int p, int d_max) {
    return materialize(std::make_shared<VectBackend>(p, d_max));
}

std::shared_ptr<const Backend> make_backend(std::string_view spec,
                                            std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::shared_ptr<const Backend>{};
    };
    auto parse_int = [](std::string_view s, int& v) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc{} && p == s.data() + s.size();
    };
    if (spec.starts_with("pset:")) {
        int n = 0;
        if (!parse_int(spec.substr(5), n) || n < 0)
            return fail("bad pset bound in '" + std::string(spec) + "'");
        return std::make_shared<PSetBackend>(n);
    }
    if (spec.starts_with("vect:")) {
        std::string_view rest = spec.substr(5);
        std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos)
            return fail("expected vect:P:D in '" + std::string(spec) + "'");
        int p = 0, d = 0;
        if (!parse_int(rest.substr(0, colon), p) ||
            !parse_int(rest.substr(colon + 1), d) || p < 2 || d < 0)
            return fail("bad vect parameters in '" + std::string(spec) + "'");
        for (int x = 2; x * x <= p; ++x)
            if (p % x == 0) return fail("vect modulus must be prime");
        return std::make_shared<VectBackend>(p, d);
    }
    return fail("unknown backend '" + std::string(spec) +
                "' (expected pset:N or vect:P:D)");
}

}  // namespace wald
