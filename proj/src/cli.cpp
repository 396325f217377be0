#include "symbisim/cli.h"

#include "symbisim/asyncpi.h"
#include "symbisim/opennet.h"
#include "symbisim/swc.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace symbisim::cli {

namespace {

using json = nlohmann::json;

struct Options {
    std::string command;
    std::vector<std::string> files;
    std::vector<std::string> seeds;
    std::optional<std::size_t> bound;
    std::size_t max_states = 10000;
    std::size_t max_iters = 10000;
    std::string format = "text";
    bool trace = false;
    unsigned jobs = 1;

    EngineOptions engine() const { return {max_states, max_iters, jobs}; }
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Declared states of a loaded model, in declaration order.
template <class State>
struct Loaded {
    std::vector<std::pair<std::string, State>> named;

    std::vector<State> pick(const std::vector<std::string> &names) const {
        std::vector<State> out;
        if (names.empty()) {
            for (const auto &[n, s] : named)
                out.push_back(s);
            return out;
        }
        for (const auto &want : names) {
            auto it = std::find_if(named.begin(), named.end(), [&](const auto &e) { return e.first == want; });
            if (it == named.end()) {
                std::string known;
                for (const auto &[n, s] : named)
                    known += (known.empty() ? "" : ", ") + n;
                throw UsageError("unknown seed '" + want + "' (declared: " + known + ")");
            }
            out.push_back(it->second);
        }
        return out;
    }

    void add(const std::string &name, State s) {
        for (const auto &[n, _] : named)
            if (n == name)
                throw UsageError("state '" + name + "' declared in more than one file");
        named.emplace_back(name, std::move(s));
    }
};

std::string block_text(const std::vector<std::string> &shown, const Partition &p) {
    std::string s;
    for (const auto &b : p.blocks()) {
        s += "{";
        for (std::size_t i = 0; i < b.size(); ++i)
            s += (i ? ", " : "") + shown[b[i]];
        s += "}";
    }
    return s;
}

template <ContextSystem I>
std::vector<std::string> shown_states(const I &sys, const std::vector<typename I::State> &states) {
    std::vector<std::string> out;
    for (const auto &p : states)
        out.push_back(sys.show_state(p));
    return out;
}

std::string dot_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

template <ContextSystem I>
json lts_json(const I &sys, const SymbolicLTS<I> &lts) {
    json universe = json::array(), edges = json::array();
    for (std::size_t p = 0; p < lts.universe.size(); ++p) {
        universe.push_back({{"id", p},
                            {"sort", sys.show_sort(sys.sort_of(lts.universe[p]))},
                            {"show", sys.show_state(lts.universe[p])}});
        for (const auto &t : lts.delta[p])
            edges.push_back({{"src", p},
                             {"ctx", sys.show_context(t.ctx)},
                             {"obs", sys.show_observation(t.obs)},
                             {"tgt", lts.find(t.tgt)}});
    }
    return {{"universe", universe}, {"lts", edges}};
}

json blocks_json(const Partition &p) {
    json out = json::array();
    for (const auto &b : p.blocks())
        out.push_back(b);
    return out;
}

template <ContextSystem I>
void write_dot(const I &sys, const SymbolicLTS<I> &lts, const Partition *part, std::ostream &out) {
    out << "digraph slts {\n  rankdir=LR;\n  node [shape=box];\n";
    auto node = [&](std::size_t p, const char *indent) {
        out << indent << "s" << p << " [label=\"" << dot_escape(sys.show_state(lts.universe[p])) << "\"];\n";
    };
    if (part) {
        auto blocks = part->blocks();
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            out << "  subgraph cluster_" << b << " {\n    label=\"B" << b << "\";\n";
            for (int p : blocks[b])
                node(p, "    ");
            out << "  }\n";
        }
    } else {
        for (std::size_t p = 0; p < lts.universe.size(); ++p)
            node(p, "  ");
    }
    for (std::size_t p = 0; p < lts.universe.size(); ++p)
        for (const auto &t : lts.delta[p])
            out << "  s" << p << " -> s" << lts.find(t.tgt) << " [label=\""
                << dot_escape(sys.show_context(t.ctx) + " , " + sys.show_observation(t.obs)) << "\"];\n";
    out << "}\n";
}

template <ContextSystem I>
void write_text_lts(const I &sys, const SymbolicLTS<I> &lts, std::ostream &out) {
    out << "# universe: " << lts.universe.size() << " states\n";
    for (std::size_t p = 0; p < lts.universe.size(); ++p) {
        const auto src = sys.show_state(lts.universe[p]);
        if (lts.delta[p].empty())
            out << src << " (no transitions)\n";
        for (const auto &t : lts.delta[p])
            out << src << " --" << sys.show_context(t.ctx) << "," << sys.show_observation(t.obs) << "--> "
                << sys.show_state(t.tgt) << "\n";
    }
}

template <ContextSystem I>
int cmd_slts(const I &sys, const std::vector<typename I::State> &seeds, const Options &o, std::ostream &out) {
    auto lts = close_universe(sys, seeds, o.max_states);
    if (o.format == "json")
        out << lts_json(sys, lts).dump(2) << "\n";
    else if (o.format == "dot")
        write_dot(sys, lts, nullptr, out);
    else
        write_text_lts(sys, lts, out);
    return kOk;
}

template <ContextSystem I>
int cmd_minimize(const I &sys, const std::vector<typename I::State> &seeds, const Options &o, std::ostream &out) {
    auto res = minimize(sys, seeds, o.engine());
    if (o.format == "json") {
        json j = lts_json(sys, res.lts);
        j["blocks"] = blocks_json(res.partition);
        j["iterations"] = res.iterations;
        if (o.trace) {
            json tr = json::array();
            for (const auto &p : res.trace)
                tr.push_back(blocks_json(p));
            j["trace"] = tr;
        }
        out << j.dump(2) << "\n";
        return kOk;
    }
    if (o.format == "dot") {
        write_dot(sys, res.lts, &res.partition, out);
        return kOk;
    }
    auto shown = shown_states(sys, res.lts.universe);
    if (o.trace)
        for (std::size_t i = 0; i < res.trace.size(); ++i)
            out << "P" << i << " = " << block_text(shown, res.trace[i]) << "\n";
    else
        out << "partition = " << block_text(shown, res.partition) << "\n";
    out << "iterations = " << res.iterations << "\n";
    return kOk;
}

template <ContextSystem I>
int cmd_bisim(const I &sys, const std::vector<typename I::State> &seeds, const Options &o, std::ostream &out) {
    if (seeds.size() != 2)
        throw UsageError("bisim needs exactly two --seed options");
    auto res = minimize(sys, seeds, o.engine());
    bool same = res.same_block(seeds[0], seeds[1]);
    out << (same ? "BISIMILAR" : "NOT BISIMILAR") << "\n";
    return same ? kOk : kNegative;
}

template <ContextSystem I>
int cmd_saturate(const I &sys, const std::vector<typename I::State> &seeds, std::size_t k, const Options &o,
                 std::ostream &out) {
    json all = json::array();
    for (const auto &p : seeds) {
        TransitionSet<I> sym(p, sys.symbolic_transitions(p));
        auto sat = saturate_set(sys, sym, k);
        auto norm = normalize(sys, sat);
        if (o.format == "json") {
            json ts = json::array();
            for (const auto &t : sat.items)
                ts.push_back({{"ctx", sys.show_context(t.ctx)},
                              {"obs", sys.show_observation(t.obs)},
                              {"tgt", sys.show_state(t.tgt)},
                              {"normal", norm.contains(t)}});
            all.push_back({{"state", sys.show_state(p)}, {"bound", k}, {"transitions", ts}});
            continue;
        }
        out << sys.show_state(p) << "  (bound " << k << ", " << sat.items.size() << " transitions, "
            << norm.items.size() << " in normal form)\n";
        for (const auto &t : sat.items)
            out << (norm.contains(t) ? "  * " : "    ") << sys.show_context(t.ctx) << ","
                << sys.show_observation(t.obs) << " -> " << sys.show_state(t.tgt) << "\n";
    }
    if (o.format == "json")
        out << all.dump(2) << "\n";
    return kOk;
}

template <ContextSystem I>
int cmd_oracle(const I &sys, const std::vector<typename I::State> &seeds, std::size_t k, const Options &o,
               std::ostream &out) {
    auto rep = oracle_check(sys, seeds, k, o.engine());
    auto shown = shown_states(sys, rep.lts.universe);
    std::vector<std::string> seed_names;
    for (int id : rep.seed_ids)
        seed_names.push_back(shown[id]);
    if (o.format == "json") {
        json j = lts_json(sys, rep.lts);
        j["agree"] = rep.agree;
        j["bound"] = k;
        j["seeds"] = rep.seed_ids;
        j["blocks"] = blocks_json(rep.symbolic);
        // oracle blocks list positions in `seeds`
        j["oracle_blocks"] = blocks_json(rep.oracle);
        j["iterations"] = rep.iterations;
        j["saturated_states"] = rep.saturated_states;
        out << j.dump(2) << "\n";
    } else {
        out << (rep.agree ? "AGREE" : "DISAGREE") << " (bound " << k << ", " << rep.saturated_states
            << " saturated states)\n";
        if (!rep.agree) {
            out << "symbolic = " << block_text(seed_names, rep.symbolic.restrict_to(rep.seed_ids)) << "\n";
            out << "oracle   = " << block_text(seed_names, rep.oracle) << "\n";
        }
    }
    return rep.agree ? kOk : kNegative;
}

template <ContextSystem I>
int dispatch(const I &sys, const std::vector<typename I::State> &seeds, std::size_t default_bound,
             const Options &o, std::ostream &out) {
    std::size_t k = o.bound.value_or(default_bound);
    if (o.command == "slts")
        return cmd_slts(sys, seeds, o, out);
    if (o.command == "minimize")
        return cmd_minimize(sys, seeds, o, out);
    if (o.command == "bisim")
        return cmd_bisim(sys, seeds, o, out);
    if (o.command == "saturate")
        return cmd_saturate(sys, seeds, k, o, out);
    return cmd_oracle(sys, seeds, k, o, out);
}

int run_swc(const Options &o, std::ostream &out) {
    Loaded<swc::Config> loaded;
    std::optional<std::string> alphabet;
    for (const auto &f : o.files) {
        auto m = swc::parse_model(read_file(f), f);
        if (alphabet && *alphabet != m.alphabet)
            throw UsageError(f + ": alphabet {" + m.alphabet + "} differs from {" + *alphabet + "}");
        alphabet = m.alphabet;
        for (auto &[n, c] : m.configs)
            loaded.add(n, std::move(c));
    }
    swc::Words sys(*alphabet);
    auto seeds = loaded.pick(o.seeds);
    return dispatch(sys, seeds, sys.sufficient_bound(seeds), o, out);
}

int run_nets(const Options &o, std::ostream &out) {
    Loaded<net::Marking> loaded;
    std::set<std::string> nets;
    for (const auto &f : o.files) {
        auto m = net::parse_model(read_file(f), f);
        for (const auto &n : m.nets)
            if (!nets.insert(n->name).second)
                throw UsageError(f + ": net '" + n->name + "' declared in more than one file");
        for (auto &[n, mk] : m.markings)
            loaded.add(n, std::move(mk));
    }
    net::OpenNets sys;
    auto seeds = loaded.pick(o.seeds);
    // Qualify state names only when two seed nets could render alike.
    for (std::size_t i = 0; i < seeds.size() && !sys.qualify; ++i)
        for (std::size_t j = 0; j < seeds.size() && !sys.qualify; ++j) {
            const auto &a = *seeds[i].net, &b = *seeds[j].net;
            if (a.name == b.name)
                continue;
            for (const auto &pl : a.places)
                if (!a.is_input(pl) && b.has_place(pl) && !b.is_input(pl))
                    sys.qualify = true;
        }
    bool needs_bound = !o.bound && (o.command == "saturate" || o.command == "oracle-check");
    std::size_t k = needs_bound ? sys.sufficient_bound(seeds, o.max_states) : 0;
    return dispatch(sys, seeds, k, o, out);
}

int run_pi(const Options &o, std::ostream &out) {
    Loaded<pi::State> loaded;
    std::optional<std::vector<std::string>> names;
    for (const auto &f : o.files) {
        auto m = pi::parse_model(read_file(f), f);
        if (names && *names != m.names)
            throw UsageError(f + ": names differ from the previous file (free names must be numbered alike)");
        names = m.names;
        for (auto &[n, s] : m.procs)
            loaded.add(n, std::move(s));
    }
    pi::AsyncPi sys;
    sys.names = *names;
    auto seeds = loaded.pick(o.seeds);
    return dispatch(sys, seeds, sys.sufficient_bound(seeds), o, out);
}

int execute(const Options &o, std::ostream &out) {
    std::set<std::string> exts;
    for (const auto &f : o.files)
        exts.insert(std::filesystem::path(f).extension().string());
    if (exts.size() != 1)
        throw UsageError("all input files must share one extension (.swc, .net or .pi)");
    const std::string ext = *exts.begin();
    if (ext == ".swc")
        return run_swc(o, out);
    if (ext == ".net")
        return run_nets(o, out);
    if (ext == ".pi")
        return run_pi(o, out);
    throw UsageError("unknown model extension '" + ext + "' (expected .swc, .net or .pi)");
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Symbolic bisimilarity for context interactive systems"};
    app.name("symbisim");
    app.require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"slts", "Print the closed symbolic LTS of the seeds"},
        {"minimize", "Symbolic partition refinement over the closed universe"},
        {"bisim", "Decide whether two seeds are symbolically bisimilar"},
        {"saturate", "Bounded saturation (and normal form) of each seed's symbolic transitions"},
        {"oracle-check", "Compare minimize with bisimilarity on the bounded saturated LTS"},
    };
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("files", o.files, "Model files (.swc, .net or .pi)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seeds, "Seed state by declared name (repeatable; default: all)");
        sub->add_option("--max-states", o.max_states, "Universe size guard")->check(CLI::PositiveNumber);
        sub->add_option("--max-iters", o.max_iters, "Refinement iteration guard")->check(CLI::PositiveNumber);
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--jobs", o.jobs, "Threads for signature computation")->check(CLI::PositiveNumber);
        if (name == "minimize")
            sub->add_flag("--trace", o.trace, "Print every partition P0, P1, ...");
        if (name == "saturate" || name == "oracle-check")
            sub->add_option("--bound", o.bound, "Context size bound (default: instance-sufficient bound)")
                ->check(CLI::NonNegativeNumber);
        sub->callback([&o, name = name] { o.command = name; });
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    try {
        return execute(o, out);
    } catch (const ResourceError &e) {
        err << "error: " << e.what() << "\n";
        return kResource;
    } catch (const ClosureViolation &e) {
        err << "error: " << e.what() << "\n";
        return kResource;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::logic_error &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

Partition read_partition_json(const std::string &text) {
    json j = json::parse(text);
    std::size_t n = j.contains("universe") ? j["universe"].size() : 0;
    std::vector<int> labels(n, -1);
    int b = 0;
    for (const auto &block : j.at("blocks")) {
        for (const auto &id : block) {
            auto i = id.get<std::size_t>();
            if (i >= labels.size())
                labels.resize(i + 1, -1);
            if (labels[i] != -1)
                throw Error("partition JSON: state " + std::to_string(i) + " occurs in two blocks");
            labels[i] = b;
        }
        ++b;
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == -1)
            throw Error("partition JSON: state " + std::to_string(i) + " is in no block");
    return Partition(labels);
}

}  // namespace symbisim::cli
