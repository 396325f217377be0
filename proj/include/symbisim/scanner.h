// Line scanner shared by the model parsers. Every model format is one
// statement per line; '#' starts a comment.
#pragma once

#include "symbisim/core.h"

#include <string>
#include <string_view>

namespace symbisim {

class Scanner {
public:
    Scanner(std::string_view text, std::string where, int line)
        : text_(text), where_(std::move(where)), line_(line) {}

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
            ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) != tok)
            return false;
        pos_ += tok.size();
        return true;
    }
    // Like accept, but tok must not continue as an identifier.
    bool accept_keyword(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) != tok)
            return false;
        std::size_t end = pos_ + tok.size();
        if (end < text_.size() && is_ident_char(text_[end]))
            return false;
        pos_ = end;
        return true;
    }
    void expect(std::string_view tok) {
        if (!accept(tok))
            fail("expected '" + std::string(tok) + "'");
    }
    bool at_ident() {
        skip_ws();
        return pos_ < text_.size() && is_ident_start(text_[pos_]);
    }
    std::string ident() {
        if (!at_ident())
            fail("expected an identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_]))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }
    // Maximal run of non-blank characters.
    std::string word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '\r')
            ++pos_;
        if (start == pos_)
            fail("unexpected end of line");
        return std::string(text_.substr(start, pos_ - start));
    }
    std::string quoted() {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '"')
            fail("expected a quoted word");
        std::size_t start = ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"')
            ++pos_;
        if (pos_ >= text_.size())
            fail("unterminated quoted word");
        return std::string(text_.substr(start, pos_++ - start));
    }
    bool at_digit() {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
    }
    int number() {
        if (!at_digit())
            fail("expected a number");
        long v = 0;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
            v = v * 10 + (text_[pos_++] - '0');
            if (v > 1000000)
                fail("number too large");
        }
        return static_cast<int>(v);
    }
    void expect_end() {
        if (!at_end())
            fail("unexpected trailing input");
    }
    [[noreturn]] void fail(const std::string &msg) const {
        throw ParseError(where_, line_, static_cast<int>(pos_) + 1, msg);
    }
    int column() const { return static_cast<int>(pos_) + 1; }

    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

private:
    std::string_view text_;
    std::string where_;
    int line_;
    std::size_t pos_ = 0;
};

// Calls f(scanner) for every non-blank line with comments removed.
template <class F>
void for_each_statement(std::string_view text, const std::string &where, F f) {
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view l = text.substr(pos, nl - pos);
        ++line;
        if (auto hash = l.find('#'); hash != std::string_view::npos)
            l = l.substr(0, hash);
        if (l.find_first_not_of(" \t\r") != std::string_view::npos) {
            Scanner sc(l, where, line);
            f(sc);
        }
        pos = nl + 1;
    }
}

}  // namespace symbisim
