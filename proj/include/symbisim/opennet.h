// Open Petri nets with input places only. The environment may drop tokens
// into input places; that is the only kind of context.
#pragma once

#include "symbisim/core.h"

#include <map>
#include <memory>
#include <string>

namespace symbisim::net {

// place -> positive count
using Multiset = std::map<std::string, int>;

std::size_t cardinality(const Multiset &m);
Multiset msum(const Multiset &a, const Multiset &b);
bool mleq(const Multiset &a, const Multiset &b);
// a - b, requires b <= a
Multiset mdiff(const Multiset &a, const Multiset &b);
Multiset mmeet(const Multiset &a, const Multiset &b);

struct NetTransition {
    std::string name;
    std::string label;
    Multiset pre, post;
};

struct NetDef {
    std::string name;
    std::vector<std::string> places;  // declaration order, used for rendering
    std::vector<std::string> inputs;  // sorted
    std::vector<NetTransition> transitions;

    bool is_input(const std::string &p) const;
    bool has_place(const std::string &p) const;
    std::string show(const Multiset &m) const;
};

struct Marking {
    std::shared_ptr<const NetDef> net;
    Multiset tokens;

    friend bool operator==(const Marking &a, const Marking &b) {
        return a.net->name == b.net->name && a.tokens == b.tokens;
    }
    friend std::strong_ordering operator<=>(const Marking &a, const Marking &b) {
        if (auto c = a.net->name <=> b.net->name; c != 0)
            return c;
        return a.tokens <=> b.tokens;
    }
};

// Interface of a marked net: its set of input places.
using Sort = std::vector<std::string>;

struct Tokens {
    Sort inputs;
    Multiset tokens;

    friend auto operator<=>(const Tokens &, const Tokens &) = default;
    friend bool operator==(const Tokens &, const Tokens &) = default;
};

class OpenNets {
public:
    using Sort = net::Sort;
    using Context = Tokens;
    using Observation = std::string;
    using State = Marking;
    using Transition = TransitionOf<OpenNets>;

    // Prefix states with their net name when rendering.
    bool qualify = false;

    Sort sort_of(const State &p) const { return p.net->inputs; }
    Sort source(const Context &c) const { return c.inputs; }
    Sort target(const Context &c) const { return c.inputs; }
    Context identity(const Sort &s) const { return {s, {}}; }
    Context compose(const Context &c, const Context &d) const;
    std::optional<Context> residual(const Context &c1, const Context &c2) const;
    State apply(const Context &c, const State &p) const;
    std::vector<Transition> symbolic_transitions(const State &p) const;
    std::optional<Context> rule_lookup(const Context &x, const Observation &o1, const Observation &o2) const;
    std::size_t ctx_size(const Context &c) const { return cardinality(c.tokens); }
    std::vector<Context> contexts_up_to(const Sort &s, std::size_t k) const;
    std::vector<std::pair<Observation, State>> base_transitions(const State &p) const;

    std::string show_sort(const Sort &s) const;
    std::string show_context(const Context &c) const;
    // Labels spelled as Greek letter names render as the letter.
    std::string show_observation(const Observation &o) const;
    std::string show_state(const State &p) const;

    // Largest input demand of a single transition times the longest simple
    // path of the symbolic LTS from the seeds.
    std::size_t sufficient_bound(const std::vector<State> &seeds, std::size_t max_states = 10000) const;
};

struct Model {
    std::vector<std::shared_ptr<const NetDef>> nets;
    std::vector<std::pair<std::string, Marking>> markings;

    std::shared_ptr<const NetDef> net(const std::string &name) const;
};

Model parse_model(std::string_view text, const std::string &where = "<input>");
Multiset parse_multiset(const NetDef &net, std::string_view text);

// The five nets of the running example (N1..N5) and S2, in the text format.
const std::string &bundled_text();
Model bundled();

}  // namespace symbisim::net
