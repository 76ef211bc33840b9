#include "wald/quiver.hpp"

#include <algorithm>
#include <stdexcept>

namespace wald {

RootedSequence rooted_sequence(const Quiver& q) {
    RootedSequence rs;
    rs.stages.push_back({});  // V_0
    for (;;) {
        const auto& prev = rs.stages.back();
        std::vector<int> next;
        for (int v : q.vertices) {
            bool ok = true;
            for (const Arrow& a : q.arrows)
                if (a.tgt == v &&
                    !std::binary_search(prev.begin(), prev.end(), a.src)) {
                    ok = false;
                    break;
                }
            if (ok) next.push_back(v);
        }
        std::sort(next.begin(), next.end());
        if (next == prev) break;
        rs.stages.push_back(std::move(next));
    }
    rs.zeta = static_cast<int>(rs.stages.size()) - 1;
    rs.complete = rs.stages.back().size() == q.vertices.size();
    return rs;
}

bool is_left_rooted(const Quiver& q) { return rooted_sequence(q).complete; }

Quiver subquiver(const Quiver& q, const RootedSequence& rs, int mu) {
    if (mu < 0 || mu >= static_cast<int>(rs.stages.size()))
        throw std::out_of_range("subquiver: stage out of range");
    const auto& keep = rs.stages[mu];
    auto in = [&](int v) {
        return std::binary_search(keep.begin(), keep.end(), v);
    };
    Quiver out;
    for (int v : q.vertices)
        if (in(v)) out.vertices.push_back(v);
    for (const Arrow& a : q.arrows)
        if (in(a.src) && in(a.tgt)) out.arrows.push_back(a);
    return out;
}

bool is_acyclic(const Quiver& q) {
    std::vector<int> indeg(q.vertices.size(), 0);
    for (const Arrow& a : q.arrows) ++indeg[q.index_of(a.tgt)];
    std::vector<int> ready;
    for (std::size_t i = 0; i < q.vertices.size(); ++i)
        if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    std::size_t removed = 0;
    while (!ready.empty()) {
        int i = ready.back();
        ready.pop_back();
        ++removed;
        for (const Arrow& a : q.arrows)
            if (a.src == q.vertices[i] && --indeg[q.index_of(a.tgt)] == 0)
                ready.push_back(q.index_of(a.tgt));
    }
    return removed == q.vertices.size();
}

}  // namespace wald
