// Asynchronous pi-calculus with finitely many names. Free names are the
// naturals 1..n of the interface; bound names are de Bruijn indices.
#pragma once

#include "symbisim/core.h"

#include <memory>
#include <string>

namespace symbisim::pi {

/*
  A name v > 0 is the free name v; v < 0 refers to an enclosing binder,
  -1 being the innermost one. Binders are input prefixes and restrictions.

  Terms are kept in a canonical shape: parallel composition is flattened,
  sorted and has 0 removed (so p | 0 and p coincide, and adding output
  particles in a different order yields the same state); nothing else is
  identified.
*/
class Term {
public:
    enum class Kind { Nil, Out, Par, Res, Bang, Sum };
    struct Guard;

    static Term nil();
    static Term out(int chan, int msg);
    static Term par(std::vector<Term> parts);
    static Term res(Term body);
    static Term bang(Term sum);  // sum must be a guarded sum
    static Term sum(std::vector<Guard> guards);
    static Term tau(Term body);
    static Term input(int chan, Term body);  // body binds the received name

    Kind kind() const;
    int chan() const;  // Out
    int msg() const;   // Out
    const std::vector<Term> &parts() const;    // Par
    const Term &body() const;                  // Res, Bang
    const std::vector<Guard> &guards() const;  // Sum
    const std::string &key() const;

    friend bool operator==(const Term &a, const Term &b) { return a.key() == b.key(); }
    friend std::strong_ordering operator<=>(const Term &a, const Term &b) { return a.key() <=> b.key(); }

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

struct Term::Guard {
    bool tau;  // tau.body, or an input chan(x).body binding x
    int chan = 0;
    Term body;
};

inline Term Term::tau(Term body) { return sum({Guard{true, 0, std::move(body)}}); }
inline Term Term::input(int chan, Term body) { return sum({Guard{false, chan, std::move(body)}}); }

// Free names renamed through f (bound names untouched).
template <class F>
Term map_free(const Term &t, F f);
Term rename_free(const Term &t, const std::vector<int> &rho);  // rho[i-1] is the image of i
Term substitute(const Term &t, int from, int to);
// Replace the dangling binder of a binder body by a free name, and back.
Term open(const Term &body, int name);
Term close(const Term &t, int name);
int max_free_name(const Term &t);
// Most inputs a single run can perform: summands exclude each other,
// parallel components add up.
std::size_t input_budget(const Term &t);

struct Action {
    enum class Kind { Tau, Out, BoundOut, In };
    Kind kind;
    int a = 0;  // channel
    int b = 0;  // object: sent, received or extruded name
    friend auto operator<=>(const Action &, const Action &) = default;
    friend bool operator==(const Action &, const Action &) = default;
};

/*
  Early step relation of p seen with interface n: bound outputs extrude
  n+1, inputs receive each of 1..n+1.
*/
std::vector<std::pair<Action, Term>> step(const Term &p, int n);

struct State {
    Term proc;
    int n = 0;
    friend auto operator<=>(const State &, const State &) = default;
    friend bool operator==(const State &, const State &) = default;
};

struct Observation {
    enum class Kind { Tau, Out, BoundOut };
    Kind kind = Kind::Tau;
    int a = 0, b = 0;

    static Observation tau() { return {Kind::Tau, 0, 0}; }
    static Observation out(int a, int b) { return {Kind::Out, a, b}; }
    static Observation bound_out(int a) { return {Kind::BoundOut, a, 0}; }
    friend auto operator<=>(const Observation &, const Observation &) = default;
    friend bool operator==(const Observation &, const Observation &) = default;
};

/*
  A context src -> tgt: rename the hole injectively through rho, then put it
  in parallel with the output particles. Contexts built from outputs alone
  have rho = identity (inclusions). Non-identity renamings arise only when
  a bound output is pushed through a context that already uses names above
  the hole's interface: the extruded name has to move past them.
*/
struct Context {
    int src = 0, tgt = 0;
    std::vector<int> rho;                  // size src, images in 1..tgt
    std::vector<std::pair<int, int>> outs;  // sorted particles chan<msg>

    bool is_inclusion() const;
    friend auto operator<=>(const Context &, const Context &) = default;
    friend bool operator==(const Context &, const Context &) = default;
};

Context inclusion(int src, int tgt, std::vector<std::pair<int, int>> outs);
// Tight inclusion: target = max(src, names used by the particles).
Context particles(int src, std::vector<std::pair<int, int>> outs);

class AsyncPi {
public:
    using Sort = int;
    using Context = pi::Context;
    using Observation = pi::Observation;
    using State = pi::State;
    using Transition = TransitionOf<AsyncPi>;

    // Identifiers of free names 1, 2, ... for rendering.
    std::vector<std::string> names;

    Sort sort_of(const State &p) const { return p.n; }
    Sort source(const Context &c) const { return c.src; }
    Sort target(const Context &c) const { return c.tgt; }
    Context identity(const Sort &n) const { return inclusion(n, n, {}); }
    Context compose(const Context &c, const Context &d) const;
    std::optional<Context> residual(const Context &c1, const Context &c2) const;
    State apply(const Context &c, const State &p) const;
    std::vector<Transition> symbolic_transitions(const State &p) const;
    std::optional<Context> rule_lookup(const Context &x, const Observation &o1, const Observation &o2) const;
    std::size_t ctx_size(const Context &c) const { return c.outs.size(); }
    // Tight inclusions from n with at most k particles over names 1..n+1.
    std::vector<Context> contexts_up_to(const Sort &n, std::size_t k) const;
    std::vector<std::pair<Observation, State>> base_transitions(const State &p) const;
    // Moves of c(p) performed by a particle of c alone (c(p) -> c'(p)).
    std::vector<std::pair<Observation, State>> particle_transitions(const Context &c, const State &p) const;

    std::string show_sort(const Sort &n) const { return std::to_string(n); }
    std::string show_context(const Context &c) const;
    std::string show_observation(const Observation &o) const;
    std::string show_state(const State &p) const;
    std::string show_term(const Term &t) const;
    std::string name(int v) const;

    // Each input consumes at most one particle, so the inputs a run can
    // perform bound the particles an experiment can use.
    std::size_t sufficient_bound(const std::vector<State> &seeds) const;
};

struct Model {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, State>> procs;
};

// `names a b c` and `proc NAME = <term> [@n]` lines.
Model parse_model(std::string_view text, const std::string &where = "<input>");
// Parses a term, extending names with unseen free identifiers.
Term parse_term(std::string_view text, std::vector<std::string> &names);
State parse_state(std::string_view text, std::vector<std::string> &names);

template <class F>
Term map_free(const Term &t, F f) {
    switch (t.kind()) {
    case Term::Kind::Nil:
        return t;
    case Term::Kind::Out: {
        int a = t.chan() > 0 ? f(t.chan()) : t.chan();
        int b = t.msg() > 0 ? f(t.msg()) : t.msg();
        return Term::out(a, b);
    }
    case Term::Kind::Par: {
        std::vector<Term> ps;
        for (const auto &q : t.parts())
            ps.push_back(map_free(q, f));
        return Term::par(std::move(ps));
    }
    case Term::Kind::Res:
        return Term::res(map_free(t.body(), f));
    case Term::Kind::Bang:
        return Term::bang(map_free(t.body(), f));
    case Term::Kind::Sum: {
        std::vector<Term::Guard> gs;
        for (const auto &g : t.guards())
            gs.push_back({g.tau, g.tau ? 0 : (g.chan > 0 ? f(g.chan) : g.chan), map_free(g.body, f)});
        return Term::sum(std::move(gs));
    }
    }
    return t;
}

}  // namespace symbisim::pi
