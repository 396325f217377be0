// Core vocabulary shared by every calculus: transitions, errors and the
// capability set an instance has to provide to the generic engine.
#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symbisim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sort mismatch while composing or applying contexts.
class ContextError : public Error {
public:
    using Error::Error;
};

// max_states / max_iters guards.
class ResourceError : public Error {
public:
    using Error::Error;
};

// A state needed by refinement is missing from the universe.
class ClosureViolation : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &where, int line, int column, const std::string &msg)
        : Error(where + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

template <class C, class O, class S>
struct BasicTransition {
    C ctx;
    O obs;
    S tgt;

    friend auto operator<=>(const BasicTransition &, const BasicTransition &) = default;
    friend bool operator==(const BasicTransition &, const BasicTransition &) = default;
};

template <class I>
using TransitionOf = BasicTransition<typename I::Context, typename I::Observation, typename I::State>;

/*
  What a calculus supplies. Besides the algebraic operations, an instance
  enumerates the contexts of size <= k leaving a sort (used by saturation
  and by the brute-force oracle) and exposes its plain, context-free step
  relation (base_transitions), from which saturated transitions are built.
*/
template <class I>
concept ContextSystem = requires(const I &sys,
                                 const typename I::Sort &s,
                                 const typename I::Context &c,
                                 const typename I::Observation &o,
                                 const typename I::State &p,
                                 std::size_t k) {
    requires std::totally_ordered<typename I::Sort>;
    requires std::totally_ordered<typename I::Context>;
    requires std::totally_ordered<typename I::Observation>;
    requires std::totally_ordered<typename I::State>;
    { sys.sort_of(p) } -> std::same_as<typename I::Sort>;
    { sys.source(c) } -> std::same_as<typename I::Sort>;
    { sys.target(c) } -> std::same_as<typename I::Sort>;
    { sys.identity(s) } -> std::same_as<typename I::Context>;
    { sys.compose(c, c) } -> std::same_as<typename I::Context>;
    { sys.residual(c, c) } -> std::same_as<std::optional<typename I::Context>>;
    { sys.apply(c, p) } -> std::same_as<typename I::State>;
    { sys.symbolic_transitions(p) } -> std::same_as<std::vector<TransitionOf<I>>>;
    { sys.rule_lookup(c, o, o) } -> std::same_as<std::optional<typename I::Context>>;
    { sys.ctx_size(c) } -> std::same_as<std::size_t>;
    { sys.contexts_up_to(s, k) } -> std::same_as<std::vector<typename I::Context>>;
    { sys.base_transitions(p) }
        -> std::same_as<std::vector<std::pair<typename I::Observation, typename I::State>>>;
    { sys.show_sort(s) } -> std::same_as<std::string>;
    { sys.show_context(c) } -> std::same_as<std::string>;
    { sys.show_observation(o) } -> std::same_as<std::string>;
    { sys.show_state(p) } -> std::same_as<std::string>;
};

template <class T>
void sort_unique(std::vector<T> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace symbisim
