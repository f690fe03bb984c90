#include "k3trace/liegroups.hpp"

#include <algorithm>
#include <numeric>

namespace k3trace {

LaurentPoly trace_poly(const ConnectedBlock& block) {
    LaurentPoly t(block.rank);
    for (int i = 0; i < block.rank; ++i) {
        ExpVec e;
        e[i] = 1;
        t.add_term(e, 1);
        e[i] = -1;
        t.add_term(e, 1);
    }
    if (block.kind == BlockKind::SOOdd) t.add_term(ExpVec{}, 1);
    return t;
}

std::vector<ExpVec> positive_roots(const ConnectedBlock& block) {
    std::vector<ExpVec> roots;
    int m = block.rank;
    auto ev = [](int i, int vi, int j, int vj) {
        ExpVec e;
        e[i] = int16_t(vi);
        if (j >= 0) e[j] = int16_t(vj);
        return e;
    };
    switch (block.kind) {
        case BlockKind::SOOdd:  // B_m: e_i, e_i +- e_j
            for (int i = 0; i < m; ++i) roots.push_back(ev(i, 1, -1, 0));
            [[fallthrough]];
        case BlockKind::SOEven:  // D_m: e_i +- e_j
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    roots.push_back(ev(i, 1, j, 1));
                    roots.push_back(ev(i, 1, j, -1));
                }
            break;
        case BlockKind::Unitary:  // A_{m-1}: e_i - e_j
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) roots.push_back(ev(i, 1, j, -1));
            break;
    }
    return roots;
}

LaurentPoly weyl_weight(const ConnectedBlock& block) {
    LaurentPoly w = LaurentPoly::constant(block.rank, 1);
    for (const ExpVec& a : positive_roots(block)) {
        // (1 - t^a)(1 - t^-a) = 2 - t^a - t^-a
        LaurentPoly f = LaurentPoly::constant(block.rank, 2);
        f.add_term(a, -1);
        f.add_term(-a, -1);
        w = w * f;
    }
    return w;
}

BigInt weyl_order(const ConnectedBlock& block) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), block.rank);
    switch (block.kind) {
        case BlockKind::SOOdd: return (BigInt(1) << block.rank) * f;
        case BlockKind::SOEven: return (BigInt(1) << (block.rank - 1)) * f;
        case BlockKind::Unitary: return f;
    }
    return f;
}

std::pair<int, int> block_support(const ConnectedBlock& block) {
    int m = block.rank;
    if (block.kind == BlockKind::SOOdd) return {1 - 2 * m, 1 + 2 * m};
    return {-2 * m, 2 * m};
}

namespace {

std::vector<Rational> ct_moment_run(const LaurentPoly& weight, const LaurentPoly& trace,
                                    const BigInt& norm, int K) {
    std::vector<Rational> out;
    out.reserve(K + 1);
    LaurentPoly state = weight;
    for (int n = 0; n <= K; ++n) {
        Rational m(state.constant_term(), norm);
        m.canonicalize();
        out.push_back(m);
        if (n < K) state = state * trace;
    }
    return out;
}

std::vector<Rational> convolve_moments(const std::vector<Rational>& a,
                                       const std::vector<Rational>& b) {
    int K = int(a.size()) - 1;
    std::vector<Rational> out(K + 1);
    for (int n = 0; n <= K; ++n) {
        Rational s(0);
        for (int i = 0; i <= n; ++i) s += Rational(binomial(n, i)) * a[i] * b[n - i];
        out[n] = s;
    }
    return out;
}

}  // namespace

std::vector<Rational> block_moments(const std::vector<ConnectedBlock>& blocks, int K) {
    if (K > kMomentCap) throw std::length_error("block_moments: K exceeds cap");
    if (blocks.empty()) throw std::invalid_argument("block_moments: no blocks");
    std::vector<Rational> acc;
    for (const ConnectedBlock& b : blocks) {
        auto mono = ct_moment_run(weyl_weight(b), trace_poly(b), weyl_order(b), K);
        acc = acc.empty() ? std::move(mono) : convolve_moments(acc, mono);
    }
    return acc;
}

LaurentPoly coset_weight(int m) {
    int d = m - 1;
    LaurentPoly w = LaurentPoly::constant(d, 1);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            LaurentPoly diff(d);
            ExpVec e;
            e[j] = 1;
            diff.add_term(e, 1);
            e[j] = -1;
            diff.add_term(e, 1);
            e = ExpVec{};
            e[k] = 1;
            diff.add_term(e, -1);
            e[k] = -1;
            diff.add_term(e, -1);
            w = w * diff * diff;
        }
    for (int j = 0; j < d; ++j) {
        LaurentPoly s = LaurentPoly::constant(d, 2);
        ExpVec e;
        e[j] = 2;
        s.add_term(e, -1);
        e[j] = -2;
        s.add_term(e, -1);
        w = w * s;
    }
    return w;
}

std::vector<Rational> coset_moments(int m, int K) {
    if (m < 2) throw std::invalid_argument("coset_moments: need SO(2m) with m >= 2");
    if (K > kMomentCap) throw std::length_error("coset_moments: K exceeds cap");
    int d = m - 1;
    LaurentPoly w = coset_weight(m);
    BigInt norm = w.constant_term();
    LaurentPoly tr(d);
    for (int i = 0; i < d; ++i) {
        ExpVec e;
        e[i] = 1;
        tr.add_term(e, 1);
        e[i] = -1;
        tr.add_term(e, 1);
    }
    return ct_moment_run(w, tr, norm, K);
}

std::pair<int, int> coset_support(int m) {
    return {-2 * (m - 1), 2 * (m - 1)};
}

bool ComponentDescriptor::is_identity() const {
    for (size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != int(i) || twists[i] != Twist::Identity) return false;
    return true;
}

ComponentDescriptor ComponentDescriptor::make(const std::vector<ConnectedBlock>& blocks,
                                              std::vector<int> perm,
                                              std::vector<Twist> twists) {
    size_t n = blocks.size();
    if (perm.size() != n || twists.size() != n)
        throw std::invalid_argument("ComponentDescriptor: size mismatch");
    for (size_t i = 0; i < n; ++i) {
        if (perm[i] < 0 || perm[i] >= int(n)) throw std::invalid_argument("bad permutation");
        if (blocks[perm[i]].kind != blocks[i].kind || blocks[perm[i]].rank != blocks[i].rank)
            throw std::invalid_argument("permutation mixes non-isomorphic blocks");
    }

    bool sigma_id = true, has_fixed = false;
    for (size_t i = 0; i < n; ++i) {
        if (perm[i] == int(i)) has_fixed = true;
        else sigma_id = false;
    }

    TraceBehaviour tb;
    if (!sigma_id) {
        if (has_fixed)
            throw std::invalid_argument("unsupported component: permutation with partial fixed blocks");
        tb = TraceBehaviour::AtomAtZero;
    } else {
        bool all_id = std::all_of(twists.begin(), twists.end(),
                                  [](Twist t) { return t == Twist::Identity; });
        bool all_refl = std::all_of(twists.begin(), twists.end(),
                                    [](Twist t) { return t == Twist::Reflection; });
        bool all_unitary = std::all_of(blocks.begin(), blocks.end(),
                                       [](const ConnectedBlock& b) { return b.kind == BlockKind::Unitary; });
        bool all_so_odd = std::all_of(blocks.begin(), blocks.end(),
                                      [](const ConnectedBlock& b) { return b.kind == BlockKind::SOOdd; });
        if (all_id) {
            tb = TraceBehaviour::Full;
        } else if (all_unitary && all_refl) {
            // conjugation swap on every unitary factor: 2 Re Tr vanishes
            tb = TraceBehaviour::AtomAtZero;
        } else if (all_so_odd && all_refl) {
            // O(2m+1)^- = -SO(2m+1) on every factor: trace is negated
            tb = TraceBehaviour::Mirrored;
        } else if (n == 1 && blocks[0].kind == BlockKind::SOEven &&
                   twists[0] == Twist::Reflection) {
            tb = TraceBehaviour::TwistedCoset;
        } else {
            throw std::invalid_argument("unsupported component twist pattern");
        }
    }
    return ComponentDescriptor{std::move(perm), std::move(twists), tb};
}

ComponentDescriptor compose(const std::vector<ConnectedBlock>& blocks,
                            const ComponentDescriptor& a, const ComponentDescriptor& b) {
    size_t n = blocks.size();
    std::vector<int> perm(n);
    std::vector<Twist> tw(n);
    std::vector<int> ainv(n);
    for (size_t i = 0; i < n; ++i) ainv[a.perm[i]] = int(i);
    for (size_t i = 0; i < n; ++i) {
        perm[i] = a.perm[b.perm[i]];
        // twist picked up at position i: a's twist there plus b's twist at a^-1(i)
        int flips = (a.twists[i] == Twist::Reflection ? 1 : 0) +
                    (b.twists[ainv[i]] == Twist::Reflection ? 1 : 0);
        tw[i] = (flips % 2) ? Twist::Reflection : Twist::Identity;
    }
    return ComponentDescriptor::make(blocks, std::move(perm), std::move(tw));
}

Rational GroupSpec::atom_mass() const {
    int atoms = 0;
    for (const auto& c : components)
        if (c.behaviour == TraceBehaviour::AtomAtZero) ++atoms;
    Rational m(atoms, int(components.size()));
    m.canonicalize();
    return m;
}

std::vector<Rational> mixture_moments(const GroupSpec& spec, int K) {
    if (spec.coset_only) return coset_moments(spec.blocks[0].rank, K);
    std::vector<Rational> base = block_moments(spec.blocks, K);
    std::vector<Rational> cos;
    std::vector<Rational> out(K + 1, Rational(0));
    for (const auto& comp : spec.components) {
        switch (comp.behaviour) {
            case TraceBehaviour::Full:
                for (int n = 0; n <= K; ++n) out[n] += base[n];
                break;
            case TraceBehaviour::Mirrored:
                for (int n = 0; n <= K; ++n) out[n] += (n % 2 ? -base[n] : base[n]);
                break;
            case TraceBehaviour::AtomAtZero:
                out[0] += 1;
                break;
            case TraceBehaviour::TwistedCoset:
                if (cos.empty()) cos = coset_moments(spec.blocks[0].rank, K);
                for (int n = 0; n <= K; ++n) out[n] += cos[n];
                break;
        }
    }
    Rational inv(1, int(spec.components.size()));
    inv.canonicalize();
    for (auto& v : out) {
        v *= inv;
        v.canonicalize();
    }
    return out;
}

namespace {

GroupSpec connected(std::string label, std::vector<ConnectedBlock> blocks) {
    GroupSpec s;
    s.label = std::move(label);
    s.blocks = std::move(blocks);
    size_t n = s.blocks.size();
    s.components.push_back(ComponentDescriptor::make(
        s.blocks, [&] { std::vector<int> p(n); std::iota(p.begin(), p.end(), 0); return p; }(),
        std::vector<Twist>(n, Twist::Identity)));
    return s;
}

std::vector<int> idperm(size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

/// Cyclic component group generated by g (identity inserted first).
void generate_cyclic(GroupSpec& s, const ComponentDescriptor& g) {
    ComponentDescriptor cur = g;
    while (!cur.is_identity()) {
        s.components.push_back(cur);
        cur = compose(s.blocks, cur, g);
    }
}

}  // namespace

GroupSpec spec_for_label(const std::string& label) {
    const ConnectedBlock so3{BlockKind::SOOdd, 1};
    const ConnectedBlock so5{BlockKind::SOOdd, 2};
    const ConnectedBlock so2{BlockKind::SOEven, 1};
    const ConnectedBlock so6{BlockKind::SOEven, 3};
    const ConnectedBlock u1{BlockKind::Unitary, 1};
    const ConnectedBlock u3{BlockKind::Unitary, 3};

    if (label == "so2") return connected(label, {so2});
    if (label == "so3") return connected(label, {so3});
    if (label == "so5") return connected(label, {so5});
    if (label == "so6") return connected(label, {so6});
    if (label == "u1") return connected(label, {u1});
    if (label == "u3") return connected(label, {u3});
    if (label == "so3xso3") return connected(label, {so3, so3});
    if (label == "u1cube") return connected(label, {u1, u1, u1});

    if (label == "o6" || label == "x1") {
        GroupSpec s = connected(label, {so6});
        s.components.push_back(
            ComponentDescriptor::make(s.blocks, idperm(1), {Twist::Reflection}));
        return s;
    }
    if (label == "o6minus") {
        GroupSpec s = connected(label, {so6});
        s.coset_only = true;
        return s;
    }
    if (label == "x2") {
        GroupSpec s = connected(label, {so6});
        return s;
    }
    if (label == "x3") return connected(label, {so5});
    if (label == "x4") {
        GroupSpec s = connected(label, {u3});
        s.components.push_back(
            ComponentDescriptor::make(s.blocks, idperm(1), {Twist::Reflection}));
        return s;
    }
    if (label == "x5") {
        // cyclic of order four: swap with one reflection
        GroupSpec s = connected(label, {so3, so3});
        generate_cyclic(s, ComponentDescriptor::make(
                               s.blocks, {1, 0}, {Twist::Reflection, Twist::Identity}));
        return s;
    }
    if (label == "x6") {
        // Klein four group
        GroupSpec s = connected(label, {so3, so3});
        s.components.push_back(ComponentDescriptor::make(
            s.blocks, idperm(2), {Twist::Reflection, Twist::Reflection}));
        s.components.push_back(ComponentDescriptor::make(
            s.blocks, {1, 0}, {Twist::Identity, Twist::Identity}));
        s.components.push_back(ComponentDescriptor::make(
            s.blocks, {1, 0}, {Twist::Reflection, Twist::Reflection}));
        return s;
    }
    if (label == "x7") {
        // cyclic of order six on three unitary circles
        GroupSpec s = connected(label, {u1, u1, u1});
        generate_cyclic(s, ComponentDescriptor::make(
                               s.blocks, {1, 2, 0},
                               {Twist::Reflection, Twist::Identity, Twist::Identity}));
        return s;
    }
    throw std::invalid_argument("unknown group label: " + label);
}

std::vector<std::string> known_labels() {
    return {"so2", "so3", "so5", "so6", "u1",      "u3", "so3xso3", "u1cube", "o6",
            "o6minus", "x1", "x2", "x3", "x4", "x5", "x6", "x7"};
}

}  // namespace k3trace
