#include "symbisim/opennet.h"

#include "symbisim/engine.h"
#include "symbisim/scanner.h"

#include <functional>
#include <set>

namespace symbisim::net {

std::size_t cardinality(const Multiset &m) {
    std::size_t n = 0;
    for (const auto &[p, k] : m)
        n += k;
    return n;
}

Multiset msum(const Multiset &a, const Multiset &b) {
    Multiset out = a;
    for (const auto &[p, k] : b)
        out[p] += k;
    return out;
}

bool mleq(const Multiset &a, const Multiset &b) {
    for (const auto &[p, k] : a) {
        auto it = b.find(p);
        if (it == b.end() || it->second < k)
            return false;
    }
    return true;
}

Multiset mdiff(const Multiset &a, const Multiset &b) {
    Multiset out = a;
    for (const auto &[p, k] : b) {
        auto it = out.find(p);
        if (it == out.end() || it->second < k)
            throw std::logic_error("mdiff: not a sub-multiset");
        if ((it->second -= k) == 0)
            out.erase(it);
    }
    return out;
}

Multiset mmeet(const Multiset &a, const Multiset &b) {
    Multiset out;
    for (const auto &[p, k] : a)
        if (auto it = b.find(p); it != b.end())
            out[p] = std::min(k, it->second);
    return out;
}

bool NetDef::is_input(const std::string &p) const {
    return std::binary_search(inputs.begin(), inputs.end(), p);
}

bool NetDef::has_place(const std::string &p) const {
    return std::find(places.begin(), places.end(), p) != places.end();
}

static std::string show_multiset(const Multiset &m, const std::vector<std::string> &order) {
    if (m.empty())
        return "∅";
    bool compact = true;
    for (const auto &[p, k] : m)
        compact = compact && p.size() == 1;
    std::string out;
    auto emit = [&](const std::string &p, int k) {
        if (!out.empty() && !compact)
            out += ' ';
        out += p;
        if (k > 1)
            out += "^" + std::to_string(k);
    };
    std::set<std::string> seen;
    for (const auto &p : order)
        if (auto it = m.find(p); it != m.end() && seen.insert(p).second)
            emit(p, it->second);
    for (const auto &[p, k] : m)
        if (!seen.count(p))
            emit(p, k);
    return out;
}

std::string NetDef::show(const Multiset &m) const { return show_multiset(m, places); }

OpenNets::Context OpenNets::compose(const Context &c, const Context &d) const {
    if (c.inputs != d.inputs)
        throw ContextError("compose: contexts over different input places");
    return {c.inputs, msum(c.tokens, d.tokens)};
}

std::optional<OpenNets::Context> OpenNets::residual(const Context &c1, const Context &c2) const {
    if (c1.inputs != c2.inputs || !mleq(c1.tokens, c2.tokens))
        return std::nullopt;
    return Context{c1.inputs, mdiff(c2.tokens, c1.tokens)};
}

OpenNets::State OpenNets::apply(const Context &c, const State &p) const {
    if (c.inputs != p.net->inputs)
        throw ContextError("apply: context sort " + show_sort(c.inputs) + " differs from " +
                           show_sort(p.net->inputs));
    return {p.net, msum(p.tokens, c.tokens)};
}

/*
  For each net transition: the part of its preset already marked is used,
  the missing part must come from the environment, so it has to sit on
  input places; the minimal context is exactly that missing part.
*/
std::vector<OpenNets::Transition> OpenNets::symbolic_transitions(const State &s) const {
    std::vector<Transition> out;
    for (const auto &t : s.net->transitions) {
        Multiset used = mmeet(s.tokens, t.pre);
        Multiset need = mdiff(t.pre, used);
        bool ok = true;
        for (const auto &[p, k] : need)
            ok = ok && s.net->is_input(p);
        if (!ok)
            continue;
        Multiset rest = mdiff(s.tokens, used);
        out.push_back({Context{s.net->inputs, need}, t.label, Marking{s.net, msum(t.post, rest)}});
    }
    sort_unique(out);
    return out;
}

std::optional<OpenNets::Context> OpenNets::rule_lookup(const Context &x, const Observation &o1,
                                                       const Observation &o2) const {
    if (o1 != o2)
        return std::nullopt;
    return x;
}

std::vector<OpenNets::Context> OpenNets::contexts_up_to(const Sort &s, std::size_t k) const {
    std::vector<Context> out;
    Multiset cur;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i == s.size()) {
            out.push_back({s, cur});
            return;
        }
        for (std::size_t n = 0; n <= left; ++n) {
            if (n > 0)
                cur[s[i]] = static_cast<int>(n);
            rec(i + 1, left - n);
        }
        cur.erase(s[i]);
    };
    rec(0, k);
    std::sort(out.begin(), out.end(), [&](const Context &a, const Context &b) {
        auto ka = cardinality(a.tokens), kb = cardinality(b.tokens);
        return ka != kb ? ka < kb : a < b;
    });
    return out;
}

std::vector<std::pair<OpenNets::Observation, OpenNets::State>>
OpenNets::base_transitions(const State &s) const {
    std::vector<std::pair<Observation, State>> out;
    for (const auto &t : s.net->transitions)
        if (mleq(t.pre, s.tokens))
            out.emplace_back(t.label, Marking{s.net, msum(t.post, mdiff(s.tokens, t.pre))});
    sort_unique(out);
    return out;
}

std::string OpenNets::show_sort(const Sort &s) const {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? "," : "") + s[i];
    return out + "}";
}

std::string OpenNets::show_observation(const Observation &o) const {
    static const std::map<std::string, std::string> greek = {
        {"alpha", "α"}, {"beta", "β"},   {"gamma", "γ"}, {"delta", "δ"}, {"epsilon", "ε"},
        {"zeta", "ζ"},  {"eta", "η"},    {"theta", "θ"}, {"iota", "ι"},  {"kappa", "κ"},
        {"lambda", "λ"}, {"mu", "μ"},    {"nu", "ν"},    {"xi", "ξ"},    {"pi", "π"},
        {"rho", "ρ"},   {"sigma", "σ"},  {"tau", "τ"},   {"phi", "φ"},   {"chi", "χ"},
        {"psi", "ψ"},   {"omega", "ω"},
    };
    auto it = greek.find(o);
    return it == greek.end() ? o : it->second;
}

std::string OpenNets::show_context(const Context &c) const { return show_multiset(c.tokens, c.inputs); }

std::string OpenNets::show_state(const State &p) const {
    std::string m = p.net->show(p.tokens);
    return qualify ? p.net->name + ":" + m : m;
}

std::size_t OpenNets::sufficient_bound(const std::vector<State> &seeds, std::size_t max_states) const {
    std::size_t demand = 0;
    std::set<std::string> seen_nets;
    for (const auto &s : seeds) {
        if (!seen_nets.insert(s.net->name).second)
            continue;
        for (const auto &t : s.net->transitions) {
            std::size_t d = 0;
            for (const auto &[p, k] : t.pre)
                if (s.net->is_input(p))
                    d += k;
            demand = std::max(demand, d);
        }
    }
    auto lts = close_universe(*this, seeds, max_states);
    // Longest simple path, by exhaustive DFS with a work cap; past the cap
    // the universe size is a safe over-approximation.
    std::size_t longest = 0, work = 0;
    const std::size_t cap = 200000;
    std::vector<char> on_path(lts.universe.size(), 0);
    std::function<void(int, std::size_t)> dfs = [&](int p, std::size_t len) {
        longest = std::max(longest, len);
        if (++work > cap)
            return;
        on_path[p] = 1;
        for (const auto &t : lts.delta[p]) {
            int q = lts.find(t.tgt);
            if (q >= 0 && !on_path[q])
                dfs(q, len + 1);
        }
        on_path[p] = 0;
    };
    for (const auto &s : seeds)
        dfs(lts.find(s), 0);
    if (work > cap)
        longest = lts.universe.size();
    // One more step than the path: at its end one side may be stuck
    // where the other still moves.
    return demand * (longest + 1);
}

std::shared_ptr<const NetDef> Model::net(const std::string &name) const {
    for (const auto &n : nets)
        if (n->name == name)
            return n;
    return nullptr;
}

static Multiset read_multiset(Scanner &sc, const NetDef &net, const std::set<std::string> &stop) {
    Multiset m;
    while (!sc.at_end()) {
        Scanner probe = sc;
        std::string w = probe.word();
        if (stop.count(w))
            break;
        sc = probe;
        if (w == "0" || w == "∅")
            continue;
        int k = 1;
        if (auto hat = w.find('^'); hat != std::string::npos) {
            std::string e = w.substr(hat + 1);
            w = w.substr(0, hat);
            if (e.empty() || e.find_first_not_of("0123456789") != std::string::npos || e.size() > 6)
                sc.fail("bad multiplicity '" + e + "'");
            k = std::stoi(e);
        }
        if (!net.has_place(w))
            sc.fail("unknown place '" + w + "' in net " + net.name);
        if (k > 0)
            m[w] += k;
    }
    return m;
}

Multiset parse_multiset(const NetDef &net, std::string_view text) {
    Scanner sc(text, "<multiset>", 1);
    return read_multiset(sc, net, {});
}

Model parse_model(std::string_view text, const std::string &where) {
    Model model;
    std::shared_ptr<NetDef> cur;
    std::set<std::string> marking_names;
    auto finish = [&] {
        if (cur)
            model.nets.push_back(cur);
    };
    for_each_statement(text, where, [&](Scanner &sc) {
        std::string kw = sc.word();
        if (kw == "net") {
            finish();
            cur = std::make_shared<NetDef>();
            cur->name = sc.ident();
            if (model.net(cur->name))
                sc.fail("duplicate net '" + cur->name + "'");
            sc.expect_end();
            return;
        }
        if (!cur)
            sc.fail("expected `net NAME` first");
        if (kw == "places") {
            while (!sc.at_end()) {
                std::string p = sc.word();
                if (p.find('^') != std::string::npos)
                    sc.fail("place names may not contain '^'");
                if (cur->has_place(p))
                    sc.fail("duplicate place '" + p + "'");
                cur->places.push_back(p);
            }
        } else if (kw == "inputs") {
            while (!sc.at_end()) {
                std::string p = sc.word();
                if (!cur->has_place(p))
                    sc.fail("input '" + p + "' is not a place");
                cur->inputs.push_back(p);
            }
            sort_unique(cur->inputs);
        } else if (kw == "trans") {
            NetTransition t;
            t.name = sc.ident();
            if (!sc.accept_keyword("label"))
                sc.fail("expected `label`");
            t.label = sc.word();
            if (!sc.accept_keyword("pre"))
                sc.fail("expected `pre`");
            t.pre = read_multiset(sc, *cur, {"post"});
            if (!sc.accept_keyword("post"))
                sc.fail("expected `post`");
            t.post = read_multiset(sc, *cur, {});
            cur->transitions.push_back(std::move(t));
        } else if (kw == "marking") {
            std::string name = sc.ident();
            sc.expect("=");
            Multiset m = read_multiset(sc, *cur, {});
            if (!marking_names.insert(name).second)
                sc.fail("duplicate marking '" + name + "'");
            model.markings.emplace_back(name, Marking{cur, std::move(m)});
        } else {
            sc.fail("unknown statement '" + kw + "'");
        }
    });
    finish();
    if (model.nets.empty())
        throw ParseError(where, 0, 0, "no nets");
    return model;
}

const std::string &bundled_text() {
    static const std::string text = R"(# Running example nets; $ is the input place of N1..N5.
net N1
places a b $
inputs $
trans t1 label alpha pre a post b
trans t2 label beta pre b $ post b
marking a = a
marking b = b

net N2
places c d $
inputs $
trans t1 label alpha pre c $^5 post d
trans t2 label beta pre d post d
marking c = c

net N3
places e f g h i $
inputs $
trans t1 label alpha pre e $^3 post f
trans t2 label beta pre f post g
trans t3 label beta pre g post h
trans t4 label beta pre h post i
trans t5 label beta pre i $ post i
marking e = e

net N4
places l m n o p q $
inputs $
trans t1 label alpha pre l $^3 post m
trans t2 label alpha pre l post q
trans t3 label beta pre m post n
trans t4 label beta pre n post o
trans t5 label beta pre o post p
trans t6 label beta pre p $ post p
trans t7 label beta pre q $ post q
marking l = l

net N5
places r s t $
inputs $
trans t1 label alpha pre r $^5 post s
trans t2 label alpha pre r post t
trans t3 label beta pre s post s
trans t4 label beta pre t $ post t
marking r = r

# Two input places; d has both a minimal and a non-minimal beta move.
net S2
places a b c d z x y
inputs x y
trans t1 label alpha pre a x post c
trans t2 label alpha pre a x y post d
trans t3 label alpha pre b x post c
trans t4 label beta pre c y post z
trans t5 label beta pre d post z
trans t6 label beta pre d y post z y
marking s2a = a
marking s2b = b
marking s2d = d
)";
    return text;
}

Model bundled() { return parse_model(bundled_text(), "<bundled>"); }

}  // namespace symbisim::net
