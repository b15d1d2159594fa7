#include "embq/parser.hpp"

#include "embq/errors.hpp"

#include <cctype>

namespace embq {

namespace {

struct Token {
    enum class Kind { Ident, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_;

    void bump(char c) {
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            bump(text_[pos_]);
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= text_.size()) {
            current_ = {Token::Kind::End, "", line_, col_};
            return;
        }
        char c = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                word += text_[pos_];
                bump(text_[pos_]);
            }
            current_ = {Token::Kind::Ident, word, current_.line, current_.col};
            return;
        }
        if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
            bump(c);
            bump('=');
            current_ = {Token::Kind::Symbol, "!=", current_.line, current_.col};
            return;
        }
        static const std::string kSingles = "()[]{}.,;:=!&|";
        if (kSingles.find(c) != std::string::npos) {
            bump(c);
            current_ = {Token::Kind::Symbol, std::string(1, c), current_.line, current_.col};
            return;
        }
        throw UsageError("formula " + std::to_string(line_) + ":" + std::to_string(col_) +
                         ": unexpected character '" + std::string(1, c) + "'");
    }
};

class Parser {
  public:
    Parser(const std::string& text, const Vocabulary& vocab, const QuantifierRegistry* registry)
        : lex_(text), vocab_(vocab), registry_(registry) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_or();
        expect_end();
        return f;
    }

  private:
    Lexer lex_;
    const Vocabulary& vocab_;
    const QuantifierRegistry* registry_;

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw UsageError("formula " + std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
    }

    void expect_symbol(const std::string& s) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Symbol || t.text != s)
            fail(t, "expected '" + s + "', got '" + (t.kind == Token::Kind::End ? "<end>" : t.text) + "'");
    }

    void expect_end() {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End) fail(t, "unexpected trailing input '" + t.text + "'");
    }

    bool peek_symbol(const std::string& s) {
        const Token& t = lex_.peek();
        return t.kind == Token::Kind::Symbol && t.text == s;
    }

    std::string expect_variable() {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Ident) fail(t, "expected a variable name");
        if (t.text == "true" || t.text == "false" || t.text == "exists" || t.text == "forall")
            fail(t, "'" + t.text + "' cannot be used as a variable");
        return t.text;
    }

    FormulaPtr parse_or() {
        std::vector<FormulaPtr> kids{parse_and()};
        while (peek_symbol("|")) {
            lex_.take();
            kids.push_back(parse_and());
        }
        return kids.size() == 1 ? kids.front() : f_or(std::move(kids));
    }

    FormulaPtr parse_and() {
        std::vector<FormulaPtr> kids{parse_unary()};
        while (peek_symbol("&")) {
            lex_.take();
            kids.push_back(parse_unary());
        }
        return kids.size() == 1 ? kids.front() : f_and(std::move(kids));
    }

    FormulaPtr parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Symbol && t.text == "!") {
            lex_.take();
            return f_not(parse_unary());
        }
        if (t.kind == Token::Kind::Symbol && t.text == "(") {
            lex_.take();
            FormulaPtr f = parse_or();
            expect_symbol(")");
            return f;
        }
        if (t.kind == Token::Kind::Ident && (t.text == "exists" || t.text == "forall")) {
            Token kw = lex_.take();
            std::string var = expect_variable();
            expect_symbol(".");
            FormulaPtr body = parse_or();
            return kw.text == "exists" ? f_exists(var, std::move(body)) : f_forall(var, std::move(body));
        }
        if (t.kind == Token::Kind::Ident) {
            Token head = lex_.take();
            if (head.text == "true") return f_true();
            if (head.text == "false") return f_false();
            if (peek_symbol("(")) return parse_atom(head);
            if (peek_symbol("[")) return parse_qapp(head);
            // A bare identifier must start an (in)equality.
            Token op = lex_.take();
            if (op.kind == Token::Kind::Symbol && op.text == "=")
                return f_eq(head.text, expect_variable());
            if (op.kind == Token::Kind::Symbol && op.text == "!=")
                return f_not(f_eq(head.text, expect_variable()));
            fail(op, "expected '=', '!=', '(' or '[' after '" + head.text + "'");
        }
        fail(t, "expected a formula");
    }

    FormulaPtr parse_atom(const Token& head) {
        if (!vocab_.has(head.text)) fail(head, "unknown relation '" + head.text + "'");
        expect_symbol("(");
        std::vector<std::string> args;
        if (!peek_symbol(")")) {
            args.push_back(expect_variable());
            while (peek_symbol(",")) {
                lex_.take();
                args.push_back(expect_variable());
            }
        }
        expect_symbol(")");
        if (static_cast<int>(args.size()) != vocab_.arity(head.text))
            fail(head, "relation '" + head.text + "' has arity " +
                           std::to_string(vocab_.arity(head.text)) + ", got " +
                           std::to_string(args.size()) + " arguments");
        return f_atom(head.text, std::move(args));
    }

    FormulaPtr parse_qapp(const Token& head) {
        if (!registry_ || !registry_->has(head.text))
            fail(head, "unknown quantifier '" + head.text + "'");
        const QuantifierDef& q = registry_->get(head.text);
        expect_symbol("[");
        std::vector<QBinding> bindings;
        while (true) {
            QBinding b;
            b.vars.push_back(expect_variable());
            while (peek_symbol(",")) {
                lex_.take();
                b.vars.push_back(expect_variable());
            }
            expect_symbol(":");
            b.body = parse_or();
            bindings.push_back(std::move(b));
            if (peek_symbol(";")) {
                lex_.take();
                continue;
            }
            break;
        }
        expect_symbol("]");
        const auto& sigma = q.sigma.relations();
        if (bindings.size() != sigma.size())
            fail(head, "quantifier '" + head.text + "' needs " + std::to_string(sigma.size()) +
                           " bindings (one per sigma symbol, in declared order), got " +
                           std::to_string(bindings.size()));
        size_t i = 0;
        for (const auto& [rel, ar] : sigma) {
            if (static_cast<int>(bindings[i].vars.size()) != ar)
                fail(head, "binding " + std::to_string(i + 1) + " of '" + head.text + "' (symbol " +
                               rel + ") must bind " + std::to_string(ar) + " variables");
            ++i;
        }
        return f_qapp(head.text, std::move(bindings));
    }
};

} // namespace

FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab,
                         const QuantifierRegistry* registry) {
    return Parser(text, vocab, registry).parse();
}

} // namespace embq
