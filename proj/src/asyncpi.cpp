#include "symbisim/asyncpi.h"

#include "symbisim/scanner.h"

#include <functional>
#include <map>
#include <set>

namespace symbisim::pi {

struct Term::Node {
    Kind kind;
    int a = 0, b = 0;
    std::vector<Term> parts;
    std::optional<Term> body;
    std::vector<Guard> guards;
    std::string key;
};

static std::string name_key(int v) { return std::to_string(v); }

Term Term::nil() {
    static const Term t(std::make_shared<const Node>(Node{Kind::Nil, 0, 0, {}, {}, {}, "0"}));
    return t;
}

Term Term::out(int chan, int msg) {
    std::string k = "o" + name_key(chan) + "," + name_key(msg);
    return Term(std::make_shared<const Node>(Node{Kind::Out, chan, msg, {}, {}, {}, std::move(k)}));
}

Term Term::par(std::vector<Term> parts) {
    std::vector<Term> flat;
    for (auto &p : parts) {
        if (p.kind() == Kind::Nil)
            continue;
        if (p.kind() == Kind::Par)
            flat.insert(flat.end(), p.parts().begin(), p.parts().end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty())
        return nil();
    if (flat.size() == 1)
        return flat.front();
    std::sort(flat.begin(), flat.end());
    std::string k = "|(";
    for (std::size_t i = 0; i < flat.size(); ++i)
        k += (i ? ";" : "") + flat[i].key();
    k += ")";
    return Term(std::make_shared<const Node>(Node{Kind::Par, 0, 0, std::move(flat), {}, {}, std::move(k)}));
}

Term Term::res(Term body) {
    std::string k = "v(" + body.key() + ")";
    return Term(std::make_shared<const Node>(Node{Kind::Res, 0, 0, {}, std::move(body), {}, std::move(k)}));
}

Term Term::bang(Term sum) {
    if (sum.kind() != Kind::Sum)
        throw Error("replication body must be a guarded sum");
    std::string k = "!(" + sum.key() + ")";
    return Term(std::make_shared<const Node>(Node{Kind::Bang, 0, 0, {}, std::move(sum), {}, std::move(k)}));
}

Term Term::sum(std::vector<Guard> guards) {
    if (guards.empty())
        return nil();
    std::string k = "+(";
    for (std::size_t i = 0; i < guards.size(); ++i) {
        k += i ? ";" : "";
        k += guards[i].tau ? "t." : "i" + name_key(guards[i].chan) + ".";
        k += guards[i].body.key();
    }
    k += ")";
    return Term(std::make_shared<const Node>(Node{Kind::Sum, 0, 0, {}, {}, std::move(guards), std::move(k)}));
}

Term::Kind Term::kind() const { return n_->kind; }
int Term::chan() const { return n_->a; }
int Term::msg() const { return n_->b; }
const std::vector<Term> &Term::parts() const { return n_->parts; }
const Term &Term::body() const { return *n_->body; }
const std::vector<Term::Guard> &Term::guards() const { return n_->guards; }
const std::string &Term::key() const { return n_->key; }

namespace {

// f(name, depth) over every name occurrence, depth = binders crossed.
template <class F>
Term map_names(const Term &t, int depth, F &f) {
    switch (t.kind()) {
    case Term::Kind::Nil:
        return t;
    case Term::Kind::Out:
        return Term::out(f(t.chan(), depth), f(t.msg(), depth));
    case Term::Kind::Par: {
        std::vector<Term> ps;
        for (const auto &q : t.parts())
            ps.push_back(map_names(q, depth, f));
        return Term::par(std::move(ps));
    }
    case Term::Kind::Res:
        return Term::res(map_names(t.body(), depth + 1, f));
    case Term::Kind::Bang:
        return Term::bang(map_names(t.body(), depth, f));
    case Term::Kind::Sum: {
        std::vector<Term::Guard> gs;
        for (const auto &g : t.guards()) {
            if (g.tau)
                gs.push_back({true, 0, map_names(g.body, depth, f)});
            else
                gs.push_back({false, f(g.chan, depth), map_names(g.body, depth + 1, f)});
        }
        return Term::sum(std::move(gs));
    }
    }
    return t;
}

}  // namespace

Term rename_free(const Term &t, const std::vector<int> &rho) {
    return map_free(t, [&](int v) {
        if (v > static_cast<int>(rho.size()))
            throw ContextError("renaming undefined on name " + std::to_string(v));
        return rho[v - 1];
    });
}

Term substitute(const Term &t, int from, int to) {
    return map_free(t, [&](int v) { return v == from ? to : v; });
}

Term open(const Term &body, int name) {
    auto f = [name](int v, int d) { return v == -(d + 1) ? name : v; };
    return map_names(body, 0, f);
}

Term close(const Term &t, int name) {
    auto f = [name](int v, int d) { return v == name ? -(d + 1) : v; };
    return map_names(t, 0, f);
}

int max_free_name(const Term &t) {
    int m = 0;
    auto f = [&m](int v, int) {
        m = std::max(m, v);
        return v;
    };
    map_names(t, 0, f);
    return m;
}

std::size_t input_budget(const Term &t) {
    switch (t.kind()) {
    case Term::Kind::Nil:
    case Term::Kind::Out:
        return 0;
    case Term::Kind::Par: {
        std::size_t n = 0;
        for (const auto &q : t.parts())
            n += input_budget(q);
        return n;
    }
    case Term::Kind::Res:
        return input_budget(t.body());
    case Term::Kind::Bang: {
        // unbounded in principle; one copy per input of the body is what
        // the finite-control fragment can use before repeating itself
        std::size_t n = 0;
        for (const auto &g : t.body().guards())
            n += (g.tau ? 0 : 1) + input_budget(g.body);
        return n;
    }
    case Term::Kind::Sum: {
        std::size_t n = 0;
        for (const auto &g : t.guards())
            n = std::max(n, (g.tau ? 0 : 1) + input_budget(g.body));
        return n;
    }
    }
    return 0;
}

namespace {

/*
  Step relation with all binders opened on scratch names. Bound outputs
  and inputs report the scratch name standing for the extruded/received
  name (free in the target); callers substitute it.
*/
struct Raw {
    Action::Kind kind;
    int a, b;
    Term target;
};

constexpr int kScratchBase = 1 << 24;

class Stepper {
public:
    std::vector<Raw> steps(const Term &t) {
        std::vector<Raw> out;
        switch (t.kind()) {
        case Term::Kind::Nil:
            break;
        case Term::Kind::Out:
            out.push_back({Action::Kind::Out, t.chan(), t.msg(), Term::nil()});
            break;
        case Term::Kind::Sum:
            for (const auto &g : t.guards()) {
                if (g.tau) {
                    out.push_back({Action::Kind::Tau, 0, 0, g.body});
                } else {
                    int x = fresh();
                    out.push_back({Action::Kind::In, g.chan, x, open(g.body, x)});
                }
            }
            break;
        case Term::Kind::Bang:
            for (auto &r : steps(t.body())) {
                r.target = Term::par({r.target, t});
                out.push_back(std::move(r));
            }
            break;
        case Term::Kind::Res:
            res_steps(t, out);
            break;
        case Term::Kind::Par:
            par_steps(t, out);
            break;
        }
        return out;
    }

private:
    int next_ = kScratchBase;
    int fresh() { return next_++; }

    void res_steps(const Term &t, std::vector<Raw> &out) {
        int x = fresh();
        for (auto &r : steps(open(t.body(), x))) {
            switch (r.kind) {
            case Action::Kind::Tau:
                out.push_back({r.kind, 0, 0, Term::res(close(r.target, x))});
                break;
            case Action::Kind::Out:
                if (r.a == x)
                    break;
                if (r.b == x)  // the restricted name escapes
                    out.push_back({Action::Kind::BoundOut, r.a, x, r.target});
                else
                    out.push_back({r.kind, r.a, r.b, Term::res(close(r.target, x))});
                break;
            case Action::Kind::BoundOut:
            case Action::Kind::In:
                if (r.a != x)
                    out.push_back({r.kind, r.a, r.b, Term::res(close(r.target, x))});
                break;
            }
        }
    }

    void par_steps(const Term &t, std::vector<Raw> &out) {
        const auto &ps = t.parts();
        std::vector<std::vector<Raw>> sub;
        for (const auto &p : ps)
            sub.push_back(steps(p));
        auto replaced = [&](std::size_t i, const Term &ti) {
            std::vector<Term> v = ps;
            v[i] = ti;
            return v;
        };
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (const auto &r : sub[i])
                out.push_back({r.kind, r.a, r.b, Term::par(replaced(i, r.target))});
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = 0; j < ps.size(); ++j) {
                if (i == j)
                    continue;
                for (const auto &snd : sub[i]) {
                    if (snd.kind != Action::Kind::Out && snd.kind != Action::Kind::BoundOut)
                        continue;
                    for (const auto &rcv : sub[j]) {
                        if (rcv.kind != Action::Kind::In || rcv.a != snd.a)
                            continue;
                        if (snd.kind == Action::Kind::Out) {
                            std::vector<Term> v = replaced(i, snd.target);
                            v[j] = substitute(rcv.target, rcv.b, snd.b);
                            out.push_back({Action::Kind::Tau, 0, 0, Term::par(std::move(v))});
                        } else {
                            // close: the extruded name stays private to the pair
                            Term pair = Term::par({snd.target, substitute(rcv.target, rcv.b, snd.b)});
                            std::vector<Term> v;
                            for (std::size_t h = 0; h < ps.size(); ++h)
                                if (h != i && h != j)
                                    v.push_back(ps[h]);
                            v.push_back(Term::res(close(pair, snd.b)));
                            out.push_back({Action::Kind::Tau, 0, 0, Term::par(std::move(v))});
                        }
                    }
                }
            }
    }
};

}  // namespace

namespace {

std::vector<std::pair<Action, Term>> step_impl(const Term &p, int n, bool inputs) {
    std::vector<std::pair<Action, Term>> out;
    Stepper st;
    for (auto &r : st.steps(p)) {
        switch (r.kind) {
        case Action::Kind::Tau:
            out.emplace_back(Action{r.kind, 0, 0}, r.target);
            break;
        case Action::Kind::Out:
            out.emplace_back(Action{r.kind, r.a, r.b}, r.target);
            break;
        case Action::Kind::BoundOut:
            out.emplace_back(Action{r.kind, r.a, n + 1}, substitute(r.target, r.b, n + 1));
            break;
        case Action::Kind::In:
            if (inputs)
                for (int j = 1; j <= n + 1; ++j)
                    out.emplace_back(Action{r.kind, r.a, j}, substitute(r.target, r.b, j));
            break;
        }
    }
    sort_unique(out);
    return out;
}

}  // namespace

std::vector<std::pair<Action, Term>> step(const Term &p, int n) { return step_impl(p, n, true); }

bool Context::is_inclusion() const {
    for (int i = 0; i < src; ++i)
        if (rho[i] != i + 1)
            return false;
    return true;
}

Context inclusion(int src, int tgt, std::vector<std::pair<int, int>> outs) {
    if (src < 0 || tgt < src)
        throw ContextError("inclusion needs 0 <= src <= tgt");
    for (auto [a, b] : outs)
        if (a < 1 || b < 1 || a > tgt || b > tgt)
            throw ContextError("particle name outside the target interface");
    Context c;
    c.src = src;
    c.tgt = tgt;
    for (int i = 1; i <= src; ++i)
        c.rho.push_back(i);
    std::sort(outs.begin(), outs.end());
    c.outs = std::move(outs);
    return c;
}

Context particles(int src, std::vector<std::pair<int, int>> outs) {
    int tgt = src;
    for (auto [a, b] : outs)
        tgt = std::max({tgt, a, b});
    return inclusion(src, tgt, std::move(outs));
}

Context AsyncPi::compose(const Context &c, const Context &d) const {
    if (c.tgt != d.src)
        throw ContextError("compose: target " + std::to_string(c.tgt) + " differs from source " +
                           std::to_string(d.src));
    Context e;
    e.src = c.src;
    e.tgt = d.tgt;
    for (int v : c.rho)
        e.rho.push_back(d.rho[v - 1]);
    for (auto [a, b] : c.outs)
        e.outs.emplace_back(d.rho[a - 1], d.rho[b - 1]);
    e.outs.insert(e.outs.end(), d.outs.begin(), d.outs.end());
    std::sort(e.outs.begin(), e.outs.end());
    return e;
}

// Multiset difference of sorted particle lists; nullopt unless sub <= all.
static std::optional<std::vector<std::pair<int, int>>> particle_diff(
    const std::vector<std::pair<int, int>> &all, std::vector<std::pair<int, int>> sub) {
    std::sort(sub.begin(), sub.end());
    std::vector<std::pair<int, int>> rest;
    std::size_t i = 0;
    for (const auto &x : all) {
        if (i < sub.size() && sub[i] == x)
            ++i;
        else
            rest.push_back(x);
    }
    if (i != sub.size())
        return std::nullopt;
    return rest;
}

/*
  Between inclusions the residual is the inclusion adding the missing
  particles, which is the unique decomposition among inclusions. Otherwise
  we search the hole renamings sigma with sigma o rho1 = rho2 mapping the
  particles of c1 into those of c2, and answer only when there is exactly
  one.
*/
std::optional<Context> AsyncPi::residual(const Context &c1, const Context &c2) const {
    if (c1.src != c2.src)
        return std::nullopt;
    if (c1.is_inclusion() && c2.is_inclusion()) {
        if (c1.tgt > c2.tgt)
            return std::nullopt;
        auto rest = particle_diff(c2.outs, c1.outs);
        if (!rest)
            return std::nullopt;
        return inclusion(c1.tgt, c2.tgt, std::move(*rest));
    }
    std::vector<int> sigma(c1.tgt, 0);
    std::vector<char> used(c2.tgt + 1, 0);
    for (int i = 0; i < c1.src; ++i) {
        int from = c1.rho[i], to = c2.rho[i];
        if (sigma[from - 1] != 0 && sigma[from - 1] != to)
            return std::nullopt;
        sigma[from - 1] = to;
    }
    for (int v : sigma)
        if (v != 0) {
            if (used[v])
                return std::nullopt;
            used[v] = 1;
        }
    std::optional<Context> found;
    int solutions = 0;
    std::function<void(int)> rec = [&](int i) {
        if (solutions > 1)
            return;
        if (i == c1.tgt) {
            std::vector<std::pair<int, int>> mapped;
            for (auto [a, b] : c1.outs)
                mapped.emplace_back(sigma[a - 1], sigma[b - 1]);
            auto rest = particle_diff(c2.outs, mapped);
            if (!rest)
                return;
            ++solutions;
            found = Context{c1.tgt, c2.tgt, sigma, std::move(*rest)};
            return;
        }
        if (sigma[i] != 0) {
            rec(i + 1);
            return;
        }
        for (int v = 1; v <= c2.tgt; ++v) {
            if (used[v])
                continue;
            used[v] = 1;
            sigma[i] = v;
            rec(i + 1);
            sigma[i] = 0;
            used[v] = 0;
        }
    };
    rec(0);
    if (solutions != 1)
        return std::nullopt;
    return found;
}

State AsyncPi::apply(const Context &c, const State &p) const {
    if (c.src != p.n)
        throw ContextError("apply: context source " + std::to_string(c.src) + " differs from interface " +
                           std::to_string(p.n));
    std::vector<Term> parts{rename_free(p.proc, c.rho)};
    for (auto [a, b] : c.outs)
        parts.push_back(Term::out(a, b));
    return {Term::par(std::move(parts)), c.tgt};
}

std::vector<AsyncPi::Transition> AsyncPi::symbolic_transitions(const State &p) const {
    std::vector<Transition> out;
    const int n = p.n;
    for (auto &[act, q] : step(p.proc, n)) {
        switch (act.kind) {
        case Action::Kind::Tau:
            out.push_back({identity(n), Observation::tau(), {q, n}});
            break;
        case Action::Kind::Out:
            out.push_back({identity(n), Observation::out(act.a, act.b), {q, n}});
            break;
        case Action::Kind::BoundOut:
            out.push_back({identity(n), Observation::bound_out(act.a), {q, n + 1}});
            break;
        case Action::Kind::In:
            out.push_back({particles(n, {{act.a, act.b}}), Observation::tau(), {q, std::max(n, act.b)}});
            break;
        }
    }
    sort_unique(out);
    return out;
}

std::optional<Context> AsyncPi::rule_lookup(const Context &x, const Observation &o1,
                                            const Observation &o2) const {
    auto ok = [&](int v) { return v >= 1 && v <= x.src; };
    switch (o1.kind) {
    case Observation::Kind::Tau:
        if (o2.kind == Observation::Kind::Tau)
            return x;
        return std::nullopt;
    case Observation::Kind::Out:
        if (ok(o1.a) && ok(o1.b) && o2 == Observation::out(x.rho[o1.a - 1], x.rho[o1.b - 1]))
            return x;
        return std::nullopt;
    case Observation::Kind::BoundOut:
        if (ok(o1.a) && o2 == Observation::bound_out(x.rho[o1.a - 1])) {
            // one sort up on both sides; the extruded name follows
            Context up = x;
            ++up.src;
            ++up.tgt;
            up.rho.push_back(up.tgt);
            return up;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::vector<Context> AsyncPi::contexts_up_to(const Sort &n, std::size_t k) const {
    std::vector<std::pair<int, int>> kinds;
    for (int a = 1; a <= n + 1; ++a)
        for (int b = 1; b <= n + 1; ++b)
            kinds.emplace_back(a, b);
    std::vector<Context> out;
    std::vector<std::pair<int, int>> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        out.push_back(particles(n, cur));
        if (cur.size() == k)
            return;
        for (std::size_t i = from; i < kinds.size(); ++i) {
            cur.push_back(kinds[i]);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<std::pair<Observation, State>> AsyncPi::base_transitions(const State &p) const {
    std::vector<std::pair<Observation, State>> out;
    for (auto &[act, q] : step_impl(p.proc, p.n, false)) {
        switch (act.kind) {
        case Action::Kind::Tau:
            out.emplace_back(Observation::tau(), State{q, p.n});
            break;
        case Action::Kind::Out:
            out.emplace_back(Observation::out(act.a, act.b), State{q, p.n});
            break;
        case Action::Kind::BoundOut:
            out.emplace_back(Observation::bound_out(act.a), State{q, p.n + 1});
            break;
        case Action::Kind::In:
            break;
        }
    }
    sort_unique(out);
    return out;
}

std::vector<std::pair<Observation, State>> AsyncPi::particle_transitions(const Context &c, const State &p) const {
    std::vector<std::pair<Observation, State>> out;
    Term hole = rename_free(p.proc, c.rho);
    for (std::size_t i = 0; i < c.outs.size(); ++i) {
        std::vector<Term> parts{hole};
        for (std::size_t j = 0; j < c.outs.size(); ++j)
            if (j != i)
                parts.push_back(Term::out(c.outs[j].first, c.outs[j].second));
        out.emplace_back(Observation::out(c.outs[i].first, c.outs[i].second), State{Term::par(parts), c.tgt});
    }
    sort_unique(out);
    return out;
}

std::string AsyncPi::name(int v) const {
    if (v >= 1 && v <= static_cast<int>(names.size()))
        return names[v - 1];
    std::string cand = v >= 1 && v <= 26 ? std::string(1, static_cast<char>('a' + v - 1)) : "n" + std::to_string(v);
    if (std::find(names.begin(), names.end(), cand) != names.end())
        cand = "n" + std::to_string(v);
    return cand;
}

namespace {

enum Level { kPar = 0, kSum = 1, kUnary = 2 };

struct Printer {
    const AsyncPi &sys;
    std::vector<std::string> env;

    std::string nm(int v) const {
        if (v > 0)
            return sys.name(v);
        int idx = static_cast<int>(env.size()) + v;
        if (idx < 0)
            return "?" + std::to_string(-v);
        return env[idx];
    }

    std::string binder() {
        std::string b = "x" + std::to_string(env.size() + 1);
        while (std::find(sys.names.begin(), sys.names.end(), b) != sys.names.end())
            b = "_" + b;
        return b;
    }

    std::string print(const Term &t, Level lvl) {
        switch (t.kind()) {
        case Term::Kind::Nil:
            return "0";
        case Term::Kind::Out:
            return "'" + nm(t.chan()) + "<" + nm(t.msg()) + ">";
        case Term::Kind::Par: {
            std::string s;
            for (std::size_t i = 0; i < t.parts().size(); ++i)
                s += (i ? " | " : "") + print(t.parts()[i], kSum);
            return lvl == kPar ? s : "(" + s + ")";
        }
        case Term::Kind::Res: {
            std::string b = binder();
            env.push_back(b);
            std::string s = "new " + b + ". " + print(t.body(), kUnary);
            env.pop_back();
            return s;
        }
        case Term::Kind::Bang:
            return "!" + print(t.body(), kUnary);
        case Term::Kind::Sum: {
            std::string s;
            for (std::size_t i = 0; i < t.guards().size(); ++i) {
                const auto &g = t.guards()[i];
                s += i ? " + " : "";
                if (g.tau) {
                    s += "tau." + print(g.body, kUnary);
                } else {
                    std::string b = binder();
                    s += nm(g.chan) + "(" + b + ").";
                    env.push_back(b);
                    s += print(g.body, kUnary);
                    env.pop_back();
                }
            }
            return t.guards().size() > 1 && lvl == kUnary ? "(" + s + ")" : s;
        }
        }
        return "?";
    }
};

}  // namespace

std::string AsyncPi::show_term(const Term &t) const {
    Printer pr{*this, {}};
    return pr.print(t, kPar);
}

std::string AsyncPi::show_state(const State &p) const { return show_term(p.proc) + " @" + std::to_string(p.n); }

std::string AsyncPi::show_context(const Context &c) const {
    std::string s = "-";
    for (auto [a, b] : c.outs)
        s += "|'" + name(a) + "<" + name(b) + ">";
    int tight = c.src;
    for (auto [a, b] : c.outs)
        tight = std::max({tight, a, b});
    if (!c.is_inclusion() || c.tgt != tight) {
        s += " :" + std::to_string(c.src) + "->" + std::to_string(c.tgt);
        if (!c.is_inclusion()) {
            s += " {";
            bool first = true;
            for (int i = 0; i < c.src; ++i)
                if (c.rho[i] != i + 1) {
                    s += (first ? "" : ",") + std::to_string(i + 1) + "->" + std::to_string(c.rho[i]);
                    first = false;
                }
            s += "}";
        }
    }
    return s;
}

std::string AsyncPi::show_observation(const Observation &o) const {
    switch (o.kind) {
    case Observation::Kind::Tau:
        return "tau";
    case Observation::Kind::Out:
        return "'" + name(o.a) + "<" + name(o.b) + ">";
    case Observation::Kind::BoundOut:
        return "'" + name(o.a) + "(new)";
    }
    return "?";
}

std::size_t AsyncPi::sufficient_bound(const std::vector<State> &seeds) const {
    std::size_t k = 0;
    for (const auto &s : seeds)
        k = std::max(k, input_budget(s.proc));
    return k;
}

namespace {

class TermParser {
public:
    TermParser(Scanner &sc, std::vector<std::string> &names) : sc_(sc), names_(names) {}

    Term par() {
        std::vector<Term> ps{sum()};
        while (sc_.accept("|"))
            ps.push_back(sum());
        return Term::par(std::move(ps));
    }

private:
    Scanner &sc_;
    std::vector<std::string> &names_;
    std::vector<std::string> env_;

    int resolve(const std::string &id) {
        for (int i = static_cast<int>(env_.size()) - 1; i >= 0; --i)
            if (env_[i] == id)
                return -(static_cast<int>(env_.size()) - i);
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == id)
                return static_cast<int>(i) + 1;
        names_.push_back(id);
        return static_cast<int>(names_.size());
    }

    std::string name_token() {
        std::string id = sc_.ident();
        if (id == "tau" || id == "new")
            sc_.fail("'" + id + "' is a keyword");
        return id;
    }

    Term sum() {
        std::vector<Term> items{unary()};
        while (sc_.accept("+"))
            items.push_back(unary());
        if (items.size() == 1)
            return items.front();
        std::vector<Term::Guard> gs;
        for (const auto &t : items) {
            if (t.kind() == Term::Kind::Nil)
                continue;
            if (t.kind() != Term::Kind::Sum)
                sc_.fail("summands must be prefixed by tau or an input");
            gs.insert(gs.end(), t.guards().begin(), t.guards().end());
        }
        return Term::sum(std::move(gs));
    }

    Term unary() {
        if (sc_.accept("("))  {
            Term t = par();
            sc_.expect(")");
            return t;
        }
        if (sc_.accept("0"))
            return Term::nil();
        if (sc_.accept("'")) {
            int a = resolve(name_token());
            sc_.expect("<");
            int b = resolve(name_token());
            sc_.expect(">");
            return Term::out(a, b);
        }
        if (sc_.accept("!")) {
            Term g = unary();
            if (g.kind() != Term::Kind::Sum)
                sc_.fail("replication body must be a guarded sum");
            return Term::bang(std::move(g));
        }
        if (sc_.accept_keyword("tau")) {
            sc_.expect(".");
            return Term::tau(unary());
        }
        if (sc_.accept_keyword("new")) {
            std::string x = name_token();
            sc_.expect(".");
            env_.push_back(x);
            Term body = unary();
            env_.pop_back();
            return Term::res(std::move(body));
        }
        if (sc_.at_ident()) {
            int a = resolve(name_token());
            sc_.expect("(");
            std::string x = name_token();
            sc_.expect(")");
            sc_.expect(".");
            env_.push_back(x);
            Term body = unary();
            env_.pop_back();
            return Term::input(a, std::move(body));
        }
        sc_.fail("expected a process");
    }
};

State read_state(Scanner &sc, std::vector<std::string> &names) {
    TermParser tp(sc, names);
    Term t = tp.par();
    int m = max_free_name(t);
    int n = m;
    if (sc.accept("@")) {
        n = sc.number();
        if (n < m)
            sc.fail("interface @" + std::to_string(n) + " is smaller than the largest free name (" +
                    std::to_string(m) + ")");
    }
    return {t, n};
}

}  // namespace

Term parse_term(std::string_view text, std::vector<std::string> &names) {
    Scanner sc(text, "<term>", 1);
    TermParser tp(sc, names);
    Term t = tp.par();
    sc.expect_end();
    return t;
}

State parse_state(std::string_view text, std::vector<std::string> &names) {
    Scanner sc(text, "<state>", 1);
    State s = read_state(sc, names);
    sc.expect_end();
    return s;
}

Model parse_model(std::string_view text, const std::string &where) {
    Model m;
    std::set<std::string> seen;
    for_each_statement(text, where, [&](Scanner &sc) {
        if (sc.accept_keyword("names")) {
            while (!sc.at_end()) {
                std::string id = sc.ident();
                if (std::find(m.names.begin(), m.names.end(), id) != m.names.end())
                    sc.fail("name '" + id + "' declared twice");
                m.names.push_back(id);
            }
            return;
        }
        if (sc.accept_keyword("proc")) {
            std::string id = sc.ident();
            if (!seen.insert(id).second)
                sc.fail("duplicate process '" + id + "'");
            sc.expect("=");
            State s = read_state(sc, m.names);
            sc.expect_end();
            m.procs.emplace_back(id, std::move(s));
            return;
        }
        sc.fail("expected `names` or `proc`");
    });
    if (m.procs.empty())
        throw ParseError(where, 0, 0, "no processes");
    return m;
}

}  // namespace symbisim::pi
