#include "htnpref/sexpr.hpp"

#include "htnpref/weight.hpp"

namespace htnpref {

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::Syntax: return "Syntax";
        case ParseErrorKind::DuplicateName: return "DuplicateName";
        case ParseErrorKind::ArityMismatch: return "ArityMismatch";
        case ParseErrorKind::UnknownTask: return "UnknownTask";
        case ParseErrorKind::UnknownPredicate: return "UnknownPredicate";
        case ParseErrorKind::NonGroundInit: return "NonGroundInit";
        case ParseErrorKind::BadValueOrder: return "BadValueOrder";
        case ParseErrorKind::UnknownMethodName: return "UnknownMethodName";
        case ParseErrorKind::UnboundVariable: return "UnboundVariable";
    }
    return "?";
}

ParseError::ParseError(ParseErrorKind kind_, std::string file_, int line_, int column_,
                       std::string message_, std::string token_)
    : std::runtime_error(file_ + ":" + std::to_string(line_) + ":" + std::to_string(column_) + ": " +
                         to_string(kind_) + ": " + message_ +
                         (token_.empty() ? "" : " near '" + token_ + "'")),
      kind(kind_),
      file(std::move(file_)),
      line(line_),
      column(column_),
      message(std::move(message_)),
      token(std::move(token_)) {}

std::string SExpr::str() const {
    switch (kind) {
        case Kind::String: return "\"" + text + "\"";
        case Kind::List: {
            std::string out = "(";
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out += ' ';
                out += items[i].str();
                if (out.size() > 80) return out + " ...)";
            }
            return out + ")";
        }
        default: return text;
    }
}

namespace {

class Reader {
public:
    Reader(std::string_view text, const std::string& file, int max_depth)
        : text_(text), file_(file), max_depth_(max_depth) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        for (skip_space(); pos_ < text_.size(); skip_space()) out.push_back(read(0));
        return out;
    }

private:
    [[noreturn]] void fail(int line, int col, const std::string& msg, const std::string& token) const {
        throw ParseError(ParseErrorKind::Syntax, file_, line, col, msg, token);
    }

    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = peek();
            if (c == ';') {
                while (pos_ < text_.size() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                advance();
            } else {
                return;
            }
        }
    }

    static bool delimiter(char c) {
        return c == '(' || c == ')' || c == ';' || c == '"' || c == ' ' || c == '\t' || c == '\n' ||
               c == '\r' || c == '\f' || c == '\v';
    }

    SExpr read(int depth) {
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = peek();
        if (c == ')') fail(line_, col_, "unexpected ')'", ")");
        if (c == '(') {
            if (depth >= max_depth_) fail(line_, col_, "nesting too deep", "(");
            advance();
            e.kind = SExpr::Kind::List;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size()) fail(e.line, e.column, "unbalanced '('", "(");
                if (peek() == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read(depth + 1));
            }
        }
        if (c == '"') {
            advance();
            e.kind = SExpr::Kind::String;
            for (;;) {
                if (pos_ >= text_.size()) fail(e.line, e.column, "unterminated string", "\"");
                char d = peek();
                advance();
                if (d == '"') return e;
                if (d == '\\') {
                    if (pos_ >= text_.size()) fail(e.line, e.column, "unterminated string", "\"");
                    d = peek();
                    advance();
                }
                e.text += d;
            }
        }
        while (pos_ < text_.size() && !delimiter(peek())) {
            e.text += peek();
            advance();
        }
        e.kind = parse_decimal(e.text) ? SExpr::Kind::Number : SExpr::Kind::Symbol;
        return e;
    }

    std::string_view text_;
    const std::string& file_;
    int max_depth_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text, const std::string& file, int max_depth) {
    return Reader(text, file, max_depth).read_all();
}

}  // namespace htnpref
