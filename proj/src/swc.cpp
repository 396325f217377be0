#include "symbisim/swc.h"

#include "symbisim/scanner.h"

#include <set>

namespace symbisim::swc {

struct Process::Node {
    Kind kind;
    std::string word;
    std::optional<Process> a, b;
    std::string text;
    std::size_t longest = 0;
};

Process Process::nil() {
    static const Process p(std::make_shared<const Node>(Node{Kind::Nil, "", {}, {}, "0", 0}));
    return p;
}

Process Process::prefix(std::string word, Process next) {
    std::string t = "\"" + word + "\".";
    t += next.kind() == Kind::Sum ? "(" + next.text() + ")" : next.text();
    std::size_t longest = std::max(word.size(), next.max_word_length());
    return Process(std::make_shared<const Node>(
        Node{Kind::Prefix, std::move(word), std::move(next), {}, std::move(t), longest}));
}

Process Process::sum(Process left, Process right) {
    std::string t = left.text() + " + ";
    t += right.kind() == Kind::Sum ? "(" + right.text() + ")" : right.text();
    std::size_t longest = std::max(left.max_word_length(), right.max_word_length());
    return Process(std::make_shared<const Node>(
        Node{Kind::Sum, "", std::move(left), std::move(right), std::move(t), longest}));
}

Process::Kind Process::kind() const { return n_->kind; }
const std::string &Process::word() const { return n_->word; }
const Process &Process::next() const { return *n_->a; }
const Process &Process::right() const { return *n_->b; }
const std::string &Process::text() const { return n_->text; }
std::size_t Process::max_word_length() const { return n_->longest; }

Words::Words(std::string alphabet) : alphabet_(std::move(alphabet)) {}

std::optional<Words::Context> Words::residual(const Context &c1, const Context &c2) const {
    if (c2.compare(0, c1.size(), c1) != 0 || c2.size() < c1.size())
        return std::nullopt;
    return c2.substr(c1.size());
}

static bool is_prefix(const std::string &w, const std::string &of) {
    return w.size() <= of.size() && of.compare(0, w.size(), w) == 0;
}

// Minimal resources extension letting each prefix fire.
static void symbolic_moves(const std::string &res, const Process &p, std::vector<Words::Transition> &out) {
    switch (p.kind()) {
    case Process::Kind::Nil:
        return;
    case Process::Kind::Prefix:
        if (is_prefix(p.word(), res))
            out.push_back({"", Bullet{}, Config{res, p.next()}});
        else if (is_prefix(res, p.word()))
            out.push_back({p.word().substr(res.size()), Bullet{}, Config{p.word(), p.next()}});
        return;
    case Process::Kind::Sum:
        symbolic_moves(res, p.next(), out);
        symbolic_moves(res, p.right(), out);
        return;
    }
}

std::vector<Words::Transition> Words::symbolic_transitions(const State &p) const {
    std::vector<Transition> out;
    symbolic_moves(p.resources, p.proc, out);
    sort_unique(out);
    return out;
}

static void base_moves(const std::string &res, const Process &p,
                       std::vector<std::pair<Bullet, Config>> &out) {
    switch (p.kind()) {
    case Process::Kind::Nil:
        return;
    case Process::Kind::Prefix:
        if (is_prefix(p.word(), res))
            out.emplace_back(Bullet{}, Config{res, p.next()});
        return;
    case Process::Kind::Sum:
        base_moves(res, p.next(), out);
        base_moves(res, p.right(), out);
        return;
    }
}

std::vector<std::pair<Bullet, Config>> Words::base_transitions(const State &p) const {
    std::vector<std::pair<Bullet, Config>> out;
    base_moves(p.resources, p.proc, out);
    sort_unique(out);
    return out;
}

std::vector<Words::Context> Words::contexts_up_to(const Sort &, std::size_t k) const {
    std::vector<Context> out{""};
    std::size_t level_start = 0;
    for (std::size_t len = 1; len <= k; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_start; i < level_end; ++i)
            for (char a : alphabet_)
                out.push_back(out[i] + a);
        level_start = level_end;
    }
    return out;
}

std::string Words::show_state(const State &p) const {
    return "\"" + p.resources + "\" |> " + p.proc.text();
}

std::size_t Words::sufficient_bound(const std::vector<State> &seeds) const {
    std::size_t k = 0;
    for (const auto &s : seeds)
        k = std::max(k, s.proc.max_word_length());
    return k;
}

namespace {

class Parser {
public:
    Parser(Scanner &sc, std::set<char> &letters) : sc_(sc), letters_(letters) {}

    std::string word() {
        if (sc_.peek() == '"') {
            std::string w = sc_.quoted();
            for (char c : w)
                letters_.insert(c);
            return w;
        }
        if (sc_.accept_keyword("eps") || sc_.accept_keyword("e"))
            return "";
        sc_.fail("expected a word (\"...\", e or eps)");
    }

    Process sum() {
        Process p = prefixed();
        while (sc_.accept("+"))
            p = Process::sum(p, prefixed());
        return p;
    }

    Process prefixed() {
        if (sc_.accept("0"))
            return Process::nil();
        if (sc_.accept("(")) {
            Process p = sum();
            sc_.expect(")");
            return p;
        }
        std::string w = word();
        sc_.expect(".");
        return Process::prefix(std::move(w), prefixed());
    }

    Config config() {
        std::string res = word();
        sc_.expect("|>");
        return Config{std::move(res), sum()};
    }

private:
    Scanner &sc_;
    std::set<char> &letters_;
};

void check_alphabet(const std::set<char> &letters, const std::string &alphabet, const std::string &where) {
    for (char c : letters)
        if (alphabet.find(c) == std::string::npos)
            throw ParseError(where, 0, 0, std::string("letter '") + c + "' is not in the alphabet {" +
                                              alphabet + "}; declare it with an `alphabet` line");
}

}  // namespace

Model parse_model(std::string_view text, const std::string &where) {
    Model m;
    bool declared = false;
    std::set<char> letters;
    std::set<std::string> names;
    for_each_statement(text, where, [&](Scanner &sc) {
        if (sc.accept_keyword("alphabet")) {
            if (declared)
                sc.fail("alphabet declared twice");
            declared = true;
            m.alphabet.clear();
            while (!sc.at_end()) {
                std::string sym = sc.word();
                if (sym.size() != 1)
                    sc.fail("alphabet symbols are single characters");
                if (m.alphabet.find(sym[0]) != std::string::npos)
                    sc.fail("duplicate alphabet symbol");
                m.alphabet += sym;
            }
            if (m.alphabet.empty())
                sc.fail("empty alphabet");
            return;
        }
        if (sc.accept_keyword("conf")) {
            std::string name;
            if (sc.at_ident()) {
                Scanner probe = sc;
                std::string id = probe.ident();
                if (probe.accept("=")) {
                    name = id;
                    sc = probe;
                }
            }
            if (name.empty())
                name = "conf" + std::to_string(m.configs.size() + 1);
            if (!names.insert(name).second)
                sc.fail("duplicate configuration name '" + name + "'");
            Parser p(sc, letters);
            Config c = p.config();
            sc.expect_end();
            m.configs.emplace_back(name, std::move(c));
            return;
        }
        sc.fail("expected `alphabet` or `conf`");
    });
    if (m.configs.empty())
        throw ParseError(where, 0, 0, "no configurations");
    check_alphabet(letters, m.alphabet, where);
    return m;
}

Process parse_process(std::string_view text, const std::string &alphabet) {
    Scanner sc(text, "<process>", 1);
    std::set<char> letters;
    Parser p(sc, letters);
    Process proc = p.sum();
    sc.expect_end();
    check_alphabet(letters, alphabet, "<process>");
    return proc;
}

Config parse_config(std::string_view text, const std::string &alphabet) {
    Scanner sc(text, "<config>", 1);
    std::set<char> letters;
    Parser p(sc, letters);
    Config c = p.config();
    sc.expect_end();
    check_alphabet(letters, alphabet, "<config>");
    return c;
}

}  // namespace symbisim::swc
