// The simple words calculus: configurations u |> p where a prefix word
// can be consumed once it is a prefix of the (read-only) resources.
#pragma once

#include "symbisim/core.h"

#include <memory>
#include <string>

namespace symbisim::swc {

class Process {
public:
    enum class Kind { Nil, Prefix, Sum };

    static Process nil();
    static Process prefix(std::string word, Process next);
    static Process sum(Process left, Process right);

    Kind kind() const;
    const std::string &word() const;   // Prefix only
    const Process &next() const;       // Prefix continuation, or left summand
    const Process &right() const;      // right summand
    // Canonical rendering; also the identity of the term.
    const std::string &text() const;
    std::size_t max_word_length() const;

    friend bool operator==(const Process &a, const Process &b) { return a.text() == b.text(); }
    friend std::strong_ordering operator<=>(const Process &a, const Process &b) {
        return a.text() <=> b.text();
    }

private:
    struct Node;
    explicit Process(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

struct Config {
    std::string resources;
    Process proc;

    friend auto operator<=>(const Config &, const Config &) = default;
    friend bool operator==(const Config &, const Config &) = default;
};

struct Sort {
    friend auto operator<=>(const Sort &, const Sort &) = default;
};

struct Bullet {
    friend auto operator<=>(const Bullet &, const Bullet &) = default;
};

class Words {
public:
    using Sort = swc::Sort;
    using Context = std::string;
    using Observation = Bullet;
    using State = Config;
    using Transition = TransitionOf<Words>;

    explicit Words(std::string alphabet = "ab");
    const std::string &alphabet() const { return alphabet_; }

    Sort sort_of(const State &) const { return {}; }
    Sort source(const Context &) const { return {}; }
    Sort target(const Context &) const { return {}; }
    Context identity(const Sort &) const { return {}; }
    Context compose(const Context &c, const Context &d) const { return c + d; }
    std::optional<Context> residual(const Context &c1, const Context &c2) const;
    State apply(const Context &c, const State &p) const { return {p.resources + c, p.proc}; }
    std::vector<Transition> symbolic_transitions(const State &p) const;
    std::optional<Context> rule_lookup(const Context &x, const Observation &, const Observation &) const {
        return x;
    }
    std::size_t ctx_size(const Context &c) const { return c.size(); }
    std::vector<Context> contexts_up_to(const Sort &, std::size_t k) const;
    std::vector<std::pair<Observation, State>> base_transitions(const State &p) const;

    std::string show_sort(const Sort &) const { return "◦"; }
    std::string show_context(const Context &c) const { return c.empty() ? "ε" : c; }
    std::string show_observation(const Observation &) const { return "•"; }
    std::string show_state(const State &p) const;

    // Longest prefix word in the seeds: resources beyond it never enable
    // anything new.
    std::size_t sufficient_bound(const std::vector<State> &seeds) const;

private:
    std::string alphabet_;
};

struct Model {
    std::string alphabet = "ab";
    std::vector<std::pair<std::string, Config>> configs;
};

// `alphabet a b`, then `conf [NAME =] "<word>" |> <proc>` lines.
Model parse_model(std::string_view text, const std::string &where = "<input>");
Process parse_process(std::string_view text, const std::string &alphabet = "ab");
Config parse_config(std::string_view text, const std::string &alphabet = "ab");

}  // namespace symbisim::swc
