#include "symbisim/engine.h"

#include <thread>

namespace symbisim {

Partition::Partition(const std::vector<int> &labels) {
    std::map<int, int> renumber;
    block_of_.reserve(labels.size());
    for (int l : labels)
        block_of_.push_back(renumber.emplace(l, static_cast<int>(renumber.size())).first->second);
    num_blocks_ = static_cast<int>(renumber.size());
}

std::vector<std::vector<int>> Partition::blocks() const {
    std::vector<std::vector<int>> out(num_blocks_);
    for (std::size_t i = 0; i < block_of_.size(); ++i)
        out[block_of_[i]].push_back(static_cast<int>(i));
    return out;
}

bool Partition::refines(const Partition &coarser) const {
    if (coarser.size() != size())
        return false;
    std::vector<int> image(num_blocks_, -1);
    for (std::size_t i = 0; i < size(); ++i) {
        int &img = image[block_of_[i]];
        if (img < 0)
            img = coarser.block_of(i);
        else if (img != coarser.block_of(i))
            return false;
    }
    return true;
}

Partition Partition::restrict_to(const std::vector<int> &elems) const {
    std::vector<int> labels;
    labels.reserve(elems.size());
    for (int e : elems)
        labels.push_back(block_of_.at(e));
    return Partition(labels);
}

/*
  Transition j of p is redundant when some transition i derives its label
  into the block of its target, and j does not derive i's label back into
  the block of i's target. The second half matters: without it every
  transition would discharge itself through the identity derivation, and two
  mutually deriving transitions would discharge each other.
*/
bool redundant_in(const RefinementInput &in, int p, int j, const Partition &part) {
    const auto &edges = in.edges[p];
    const auto &der = in.der[p];
    const std::size_t m = edges.size();
    const int target_block = part.block_of(edges[j].tgt);
    for (std::size_t i = 0; i < m; ++i) {
        int fwd = der[i * m + j];
        if (fwd < 0 || part.block_of(fwd) != target_block)
            continue;
        int bwd = der[j * m + i];
        if (bwd >= 0 && part.block_of(bwd) == part.block_of(edges[i].tgt))
            continue;
        return true;
    }
    return false;
}

std::vector<std::pair<int, int>> signature(const RefinementInput &in, int p, const Partition &part) {
    std::vector<std::pair<int, int>> sig;
    const auto &edges = in.edges[p];
    for (std::size_t j = 0; j < edges.size(); ++j)
        if (!redundant_in(in, p, static_cast<int>(j), part))
            sig.emplace_back(edges[j].label, part.block_of(edges[j].tgt));
    sort_unique(sig);
    return sig;
}

Partition initial_partition(const RefinementInput &in) {
    return Partition(in.sort_id);
}

Partition refine_step(const RefinementInput &in, const Partition &part, unsigned jobs) {
    const std::size_t n = in.edges.size();
    using Key = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Key> keys(n);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p)
            keys[p] = Key{in.sort_id[p], signature(in, static_cast<int>(p), part)};
    };
    if (jobs <= 1 || n < 2 * jobs) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (n + jobs - 1) / jobs;
        for (std::size_t lo = 0; lo < n; lo += chunk)
            pool.emplace_back(work, lo, std::min(n, lo + chunk));
        for (auto &t : pool)
            t.join();
    }
    return Partition::from_keys(keys);
}

RefinementRun refine_symbolic(const RefinementInput &in, std::size_t max_iters, unsigned jobs) {
    RefinementRun run;
    run.trace.push_back(initial_partition(in));
    for (;;) {
        if (static_cast<std::size_t>(run.iterations) >= max_iters)
            throw ResourceError("refinement did not stabilize within max_iters = " +
                                std::to_string(max_iters));
        Partition next = refine_step(in, run.trace.back(), jobs);
        ++run.iterations;
        if (!next.refines(run.trace.back()))
            throw std::logic_error("refinement merged blocks of the previous partition");
        bool stable = next == run.trace.back();
        run.trace.push_back(std::move(next));
        if (stable)
            return run;
    }
}

Partition ks_refine(const PlainLTS &lts) {
    const std::size_t n = lts.out.size();
    Partition part(lts.initial);
    for (;;) {
        using Key = std::pair<int, std::vector<std::pair<int, int>>>;
        std::vector<Key> keys(n);
        for (std::size_t p = 0; p < n; ++p) {
            std::vector<std::pair<int, int>> sig;
            sig.reserve(lts.out[p].size());
            for (auto [label, q] : lts.out[p])
                sig.emplace_back(label, part.block_of(q));
            sort_unique(sig);
            keys[p] = Key{part.block_of(p), std::move(sig)};
        }
        Partition next = Partition::from_keys(keys);
        if (next.num_blocks() == part.num_blocks())
            return next;
        part = std::move(next);
    }
}

}  // namespace symbisim
