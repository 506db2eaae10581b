#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace htnpref {

enum class ParseErrorKind {
    Syntax,
    DuplicateName,
    ArityMismatch,
    UnknownTask,
    UnknownPredicate,
    NonGroundInit,
    BadValueOrder,
    UnknownMethodName,
    UnboundVariable,
};

const char* to_string(ParseErrorKind kind);

/// Every parser failure. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::string file, int line, int column, std::string message,
               std::string token);

    ParseErrorKind kind;
    std::string file;
    int line;
    int column;
    std::string message;
    std::string token;
};

struct SExpr {
    enum class Kind { Symbol, Number, String, List };

    Kind kind = Kind::Symbol;
    std::string text;  // symbol/number spelling or string contents
    std::vector<SExpr> items;
    int line = 1;
    int column = 1;

    bool is_list() const { return kind == Kind::List; }
    bool is_symbol() const { return kind == Kind::Symbol; }
    bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
    /// Printed form, used for the offending-token field of errors.
    std::string str() const;
};

/// Reads every top-level expression in `text`. Nesting deeper than
/// `max_depth` is reported as a syntax error instead of recursing further.
std::vector<SExpr> read_sexprs(std::string_view text, const std::string& file,
                               int max_depth = 256);

}  // namespace htnpref
