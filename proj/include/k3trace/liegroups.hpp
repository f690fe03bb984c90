#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3trace/laurent.hpp"
#include "k3trace/rational.hpp"

namespace k3trace {

enum class BlockKind { SOOdd, SOEven, Unitary };

/// One connected factor of a Sato-Tate group: SO(2m+1), SO(2m) or U(m),
/// identified by its torus rank m. The trace convention is the naive trace
/// for SO blocks and 2 Re Tr for unitary blocks; on the torus both read
/// sum_i (z_i + z_i^-1), plus 1 for SO(odd).
struct ConnectedBlock {
    BlockKind kind;
    int rank;  // torus dimension m >= 1

    int matrix_dim() const {
        switch (kind) {
            case BlockKind::SOOdd: return 2 * rank + 1;
            case BlockKind::SOEven: return 2 * rank;
            case BlockKind::Unitary: return 2 * rank;  // dim of the real trace model
        }
        return 0;
    }
    bool operator==(const ConnectedBlock& o) const {
        return kind == o.kind && rank == o.rank;
    }
};

/// Trace of the torus as a Laurent polynomial in the block's own variables.
LaurentPoly trace_poly(const ConnectedBlock& block);

/// prod_{alpha in Delta+} (1 - t^alpha)(1 - t^-alpha): B_m roots for SO(odd),
/// D_m for SO(even), A_{m-1} roots z_i z_j^-1 for U(m).
LaurentPoly weyl_weight(const ConnectedBlock& block);

/// Positive roots of the block, as exponent vectors.
std::vector<ExpVec> positive_roots(const ConnectedBlock& block);

/// |W|: 2^m m! (B_m), 2^(m-1) m! (D_m), m! (U(m)).
BigInt weyl_order(const ConnectedBlock& block);

/// Trace range of the block on its torus.
std::pair<int, int> block_support(const ConnectedBlock& block);

constexpr int kMomentCap = 40;

/// Exact moments n = 0..K of the trace distribution of a product of
/// connected blocks. Single blocks go through constant-term extraction of
/// tr^n * weight; products through binomial convolution of the factors.
std::vector<Rational> block_moments(const std::vector<ConnectedBlock>& blocks, int K);

/// Exact moments of the non-neutral coset O(2m)^- (reflection coset of
/// SO(2m), m >= 2). The coset torus carries m-1 angles; the forced
/// eigenvalue pair {+1,-1} contributes 0 to the trace. The weight is the
/// eigenvalue-density form prod_{j<k}(c_j - c_k)^2 prod_j s_j^2, cleared of
/// denominators and normalised by its own constant term.
std::vector<Rational> coset_moments(int m, int K);

/// The cleared O(2m)^- weight in m-1 variables:
/// prod_{j<k} (C_j - C_k)^2 * prod_j (2 - z_j^2 - z_j^-2), C_j = z_j + z_j^-1.
LaurentPoly coset_weight(int m);

/// Trace range of the O(2m)^- coset.
std::pair<int, int> coset_support(int m);

enum class Twist { Identity, Reflection };

enum class TraceBehaviour { Full, Mirrored, AtomAtZero, TwistedCoset };

/// One connected component of a disconnected Sato-Tate group, recorded as
/// an element of the wreath product (Z/2)^delta x S_delta acting on the
/// factor blocks. The trace behaviour is derived from (perm, twists), never
/// declared by the caller.
struct ComponentDescriptor {
    std::vector<int> perm;      // image of block i under the permutation
    std::vector<Twist> twists;  // per-block twist
    TraceBehaviour behaviour;

    static ComponentDescriptor make(const std::vector<ConnectedBlock>& blocks,
                                    std::vector<int> perm, std::vector<Twist> twists);
    bool is_identity() const;
};

/// Wreath-product composition (a then b acting on block vectors).
ComponentDescriptor compose(const std::vector<ConnectedBlock>& blocks,
                            const ComponentDescriptor& a, const ComponentDescriptor& b);

struct GroupSpec {
    std::string label;
    std::vector<ConnectedBlock> blocks;
    std::vector<ComponentDescriptor> components;  // identity first
    bool coset_only = false;  // label "o6minus": just the reflection coset

    int component_count() const { return int(components.size()); }
    /// Mass of the atom at zero in the trace mixture.
    Rational atom_mass() const;
};

/// Equal-weight mixture moments across the components: full contributes
/// m_n, mirrored (-1)^n m_n, atom-at-zero [n = 0], twisted coset the coset
/// moments.
std::vector<Rational> mixture_moments(const GroupSpec& spec, int K);

/// Known labels: so2, so3, so5, so6, u1, u3, so3xso3, u1cube, o6, o6minus,
/// x1 .. x7. Throws std::invalid_argument for anything else.
GroupSpec spec_for_label(const std::string& label);

std::vector<std::string> known_labels();

}  // namespace k3trace
