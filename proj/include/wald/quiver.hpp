#pragma once

#include <vector>

#include "wald/fincat.hpp"

namespace wald {

struct Arrow {
    int id = 0;
    int src = 0;  // vertex label
    int tgt = 0;  // vertex label
};

/// A finite quiver: an ordered list of vertex labels and a list of arrows.
/// Parallel arrows and loops are allowed.  Subquivers keep the labels of the
/// ambient quiver, so vertex labels need not be contiguous.
struct Quiver {
    std::vector<int> vertices;
    std::vector<Arrow> arrows;

    bool has_vertex(int v) const {
        for (int w : vertices)
            if (w == v) return true;
        return false;
    }
    /// position of label v in the vertex list, -1 if absent
    int index_of(int v) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == v) return static_cast<int>(i);
        return -1;
    }
    /// ids of the arrows with target v, in arrow-id order
    std::vector<int> arrows_into(int v) const {
        std::vector<int> out;
        for (const Arrow& a : arrows)
            if (a.tgt == v) out.push_back(a.id);
        return out;
    }
};

/// The stages V_0 = {} with V_{mu+1} = { i : every arrow into i has its
/// source in V_mu }, iterated to the fixpoint.  `complete` iff the fixpoint
/// is all of V.
struct RootedSequence {
    std::vector<std::vector<int>> stages;  // stages[mu] = sorted V_mu
    int zeta = 0;                          // index of the fixpoint stage
    bool complete = false;
};

RootedSequence rooted_sequence(const Quiver& q);

/// A finite quiver is left rooted iff its rooted sequence exhausts the
/// vertices (equivalently, iff it has no oriented cycle).
bool is_left_rooted(const Quiver& q);

/// The subquiver spanned by stage mu: the vertices of V_mu with the arrows
/// whose endpoints both lie in V_mu.  Throws std::out_of_range when mu
/// exceeds the stage count.
Quiver subquiver(const Quiver& q, const RootedSequence& rs, int mu);

/// Independent acyclicity check by Kahn-style topological sorting; used to
/// cross-validate is_left_rooted.
bool is_acyclic(const Quiver& q);

}  // namespace wald
