// Derivation between transitions, dominance, normalization and bounded
// saturation. Everything here is a pure function of the instance.
#pragma once

#include "symbisim/core.h"

#include <set>
#include <stdexcept>

namespace symbisim {

template <ContextSystem I>
struct TransitionSet {
    typename I::State source;
    std::vector<TransitionOf<I>> items;  // kept sorted and duplicate free

    TransitionSet(typename I::State src, std::vector<TransitionOf<I>> ts)
        : source(std::move(src)), items(std::move(ts)) {
        sort_unique(items);
    }
    bool contains(const TransitionOf<I> &t) const {
        return std::binary_search(items.begin(), items.end(), t);
    }
    friend bool operator==(const TransitionSet &a, const TransitionSet &b) {
        return a.source == b.source && a.items == b.items;
    }
};

// t1 derives (c2, o2, ?): the residual d of ctx(t1) in c2, then the rule
// d |-o1->o2 e, then e applied to the target of t1.
template <ContextSystem I>
std::optional<typename I::State> derives(const I &sys, const TransitionOf<I> &t1,
                                         const typename I::Context &c2,
                                         const typename I::Observation &o2) {
    auto d = sys.residual(t1.ctx, c2);
    if (!d)
        return std::nullopt;
    auto e = sys.rule_lookup(*d, t1.obs, o2);
    if (!e)
        return std::nullopt;
    return sys.apply(*e, t1.tgt);
}

// Extended derivation through d: decompose ctx(t1) against d;c2.
template <ContextSystem I>
std::optional<typename I::State> derive_under(const I &sys, const typename I::Context &d,
                                              const TransitionOf<I> &t1,
                                              const typename I::Context &c2,
                                              const typename I::Observation &o2) {
    if (sys.target(d) != sys.source(c2))
        throw ContextError("derive_under: target of d differs from source of c2");
    return derives(sys, t1, sys.compose(d, c2), o2);
}

template <ContextSystem I>
bool derives_transition(const I &sys, const TransitionOf<I> &t1, const TransitionOf<I> &t2) {
    auto q = derives(sys, t1, t2.ctx, t2.obs);
    return q && *q == t2.tgt;
}

template <ContextSystem I>
bool dominates(const I &sys, const TransitionOf<I> &t1, const TransitionOf<I> &t2) {
    return derives_transition(sys, t1, t2) && !derives_transition(sys, t2, t1);
}

template <ContextSystem I>
bool equivalent(const I &sys, const TransitionOf<I> &t1, const TransitionOf<I> &t2) {
    return derives_transition(sys, t1, t2) && derives_transition(sys, t2, t1);
}

/*
  Drops every strictly dominated member. Closing under equivalent
  transitions is the identity for the bundled calculi, where equivalence
  classes are singletons; a distinct equivalent pair therefore means the
  instance breaks that assumption and we refuse to guess.
*/
template <ContextSystem I>
TransitionSet<I> normalize(const I &sys, const TransitionSet<I> &a) {
    std::vector<TransitionOf<I>> kept;
    const auto &xs = a.items;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        bool redundant = false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i == j)
                continue;
            bool fwd = derives_transition(sys, xs[i], xs[j]);
            bool bwd = derives_transition(sys, xs[j], xs[i]);
            if (fwd && bwd)
                throw std::logic_error("normalize: distinct equivalent transitions (" +
                                       sys.show_context(xs[i].ctx) + " / " +
                                       sys.show_context(xs[j].ctx) + ")");
            if (fwd) {
                redundant = true;
                break;
            }
        }
        if (!redundant)
            kept.push_back(xs[j]);
    }
    return TransitionSet<I>(a.source, std::move(kept));
}

/*
  Closure of A under derivation, truncated to contexts of size <= k
  (members of A above the bound are dropped too: nothing they derive is
  small enough to be kept). Candidate contexts are the instance's
  enumeration from the source sort; candidate observations are those
  occurring in A (every bundled inference system maps an observation to a
  determined one).
*/
template <ContextSystem I>
TransitionSet<I> saturate_set(const I &sys, const TransitionSet<I> &a, std::size_t k) {
    std::set<TransitionOf<I>> out;
    for (const auto &t : a.items)
        if (sys.ctx_size(t.ctx) <= k)
            out.insert(t);
    std::set<typename I::Observation> observations;
    for (const auto &t : a.items)
        observations.insert(t.obs);
    auto contexts = sys.contexts_up_to(sys.sort_of(a.source), k);
    std::vector<TransitionOf<I>> frontier(out.begin(), out.end());
    while (!frontier.empty()) {
        std::vector<TransitionOf<I>> next;
        for (const auto &t : frontier) {
            for (const auto &c : contexts) {
                for (const auto &o : observations) {
                    auto q = derives(sys, t, c, o);
                    if (!q)
                        continue;
                    TransitionOf<I> u{c, o, std::move(*q)};
                    if (out.insert(u).second)
                        next.push_back(std::move(u));
                }
            }
        }
        frontier = std::move(next);
    }
    return TransitionSet<I>(a.source, std::vector<TransitionOf<I>>(out.begin(), out.end()));
}

// Dominance must strictly decrease context size; false on a violation.
template <ContextSystem I>
bool check_well_founded(const I &sys, const TransitionSet<I> &a) {
    for (const auto &t1 : a.items)
        for (const auto &t2 : a.items)
            if (dominates(sys, t1, t2) && !(sys.ctx_size(t1.ctx) < sys.ctx_size(t2.ctx)))
                return false;
    return true;
}

}  // namespace symbisim
