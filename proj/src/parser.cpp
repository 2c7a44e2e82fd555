#include "pisym/parser.hpp"

#include <cctype>
#include <vector>

namespace pisym {

namespace {

struct Token {
    enum class Kind { Ident, Bang, Query, LParen, RParen, Dot, Plus, Bar, End };
    Kind kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++pos_, ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_, ++col_;
            } else {
                break;
            }
        }
        int l = line_, c0 = col_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::Kind::End, "", l, c0};
            return;
        }
        char c = src_[pos_];
        auto simple = [&](Token::Kind k) {
            ++pos_, ++col_;
            tok_ = {k, std::string(1, c), l, c0};
        };
        switch (c) {
            case '!': return simple(Token::Kind::Bang);
            case '?': return simple(Token::Kind::Query);
            case '(': return simple(Token::Kind::LParen);
            case ')': return simple(Token::Kind::RParen);
            case '.': return simple(Token::Kind::Dot);
            case '+': return simple(Token::Kind::Plus);
            case '|': return simple(Token::Kind::Bar);
            default: break;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
            std::size_t start = pos_;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
                    ++pos_, ++col_;
                } else {
                    break;
                }
            }
            tok_ = {Token::Kind::Ident, src_.substr(start, pos_ - start), l, c0};
            return;
        }
        throw ParseError(l, c0, std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_{Token::Kind::End, "", 1, 1};
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    ProcessPtr run() {
        ProcessPtr p = process();
        expect(Token::Kind::End, "end of input");
        return p;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg);
    }

    Token expect(Token::Kind k, const std::string& what) {
        if (lex_.peek().kind != k)
            fail(lex_.peek(), "expected " + what + ", got '" + lex_.peek().text + "'");
        return lex_.take();
    }

    bool at_ident(const char* word) const {
        return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == word;
    }

    Name name_token(const char* what) {
        Token t = expect(Token::Kind::Ident, what);
        if (t.text == "0" || t.text == "new" || t.text == "tau" || t.text == "check")
            fail(t, "'" + t.text + "' cannot be used as a name");
        if (!valid_name_token(t.text)) fail(t, "invalid name '" + t.text + "'");
        return Name{t.text};
    }

    // process := choice ('|' choice)*
    ProcessPtr process() {
        std::vector<ProcessPtr> parts{choice()};
        while (lex_.peek().kind == Token::Kind::Bar) {
            lex_.take();
            parts.push_back(choice());
        }
        return parts.size() == 1 ? parts.front() : par(std::move(parts));
    }

    // choice := term ('+' term)*; every operand of a real sum must be guarded.
    ProcessPtr choice() {
        Token first = lex_.peek();
        ProcessPtr head = term();
        if (lex_.peek().kind != Token::Kind::Plus) return head;
        std::vector<Branch> branches = guarded(head, first);
        while (lex_.peek().kind == Token::Kind::Plus) {
            lex_.take();
            Token t = lex_.peek();
            ProcessPtr operand = term();
            for (auto& b : guarded(operand, t)) branches.push_back(std::move(b));
        }
        return sum(std::move(branches));
    }

    // Sums may only combine guarded terms; parenthesized sums flatten in.
    std::vector<Branch> guarded(const ProcessPtr& p, const Token& at) {
        if (p->kind == Process::Kind::Sum && !p->branches.empty()) return p->branches;
        fail(at, "'+' needs a prefix-guarded operand");
    }

    // term := 'new' x '.' process | '!' term | prefix-term | primary
    ProcessPtr term() {
        const Token& t = lex_.peek();
        if (at_ident("new")) {
            lex_.take();
            Name binder = name_token("restricted name");
            expect(Token::Kind::Dot, "'.' after 'new x'");
            return res(std::move(binder), process());
        }
        if (t.kind == Token::Kind::Bang) {
            lex_.take();
            return rep(term());
        }
        if (at_ident("tau")) {
            lex_.take();
            return tau(continuation());
        }
        if (t.kind == Token::Kind::Ident && t.text != "0" && t.text != "check") {
            Name ch = name_token("channel");
            const Token& op = lex_.peek();
            if (op.kind == Token::Kind::Bang) {
                lex_.take();
                Name datum = Name::unit();
                if (lex_.peek().kind == Token::Kind::Ident) datum = name_token("datum");
                return out(std::move(ch), std::move(datum), continuation());
            }
            if (op.kind == Token::Kind::Query) {
                lex_.take();
                expect(Token::Kind::LParen, "'(' after '?'");
                Name binder = Name::unit();
                if (lex_.peek().kind == Token::Kind::Ident) binder = name_token("binder");
                expect(Token::Kind::RParen, "')'");
                return in(std::move(ch), std::move(binder), continuation());
            }
            fail(op, "expected '!' or '?' after channel name");
        }
        return primary();
    }

    // Optional '.' continuation; absent means 0.
    ProcessPtr continuation() {
        if (lex_.peek().kind == Token::Kind::Dot) {
            lex_.take();
            return term();
        }
        return nil();
    }

    ProcessPtr primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::LParen) {
            lex_.take();
            ProcessPtr p = process();
            expect(Token::Kind::RParen, "')'");
            return p;
        }
        if (t.kind == Token::Kind::Ident) {
            if (t.text == "0") {
                lex_.take();
                return nil();
            }
            if (t.text == "check") {
                lex_.take();
                return success();
            }
        }
        fail(t, "expected a process, got '" + t.text + "'");
    }

    Lexer lex_;
};

}  // namespace

ProcessPtr parse_syntax(const std::string& text) { return Parser(text).run(); }

ProcessPtr parse(const std::string& text) {
    ProcessPtr p = parse_syntax(text);
    if (auto wf = well_formed(p); !wf.ok) throw ParseError(0, 0, wf.reason);
    return p;
}

}  // namespace pisym
