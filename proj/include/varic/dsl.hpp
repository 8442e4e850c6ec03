#pragma once

// Problem files (.vp): declarations, equations and one task.

#include "varic/expr.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace varic {

/// 1-based position in the source text (column counts bytes).
struct SourcePos {
    int line = 1;
    int column = 1;
};

class ParseError : public Error {
public:
    ParseError(SourcePos pos, const std::string& message)
        : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos), message_(message)
    {
    }
    [[nodiscard]] SourcePos pos() const noexcept { return pos_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

enum class TaskKind { Check, Lagrangian, Multiplier, Nonlinear, Helmholtz, Representatives };

std::string to_string(TaskKind t);

struct Task {
    TaskKind kind = TaskKind::Check;
    bool matrix = false;        // multiplier: matrix[...] rather than diag(...)
    std::vector<Expr> entries;  // multiplier entries (row-major) or transformations

    friend bool operator==(const Task&, const Task&) = default;
};

struct Options {
    static constexpr int kDefaultMaxOrder = 4;
    static constexpr int kDefaultDegree = 2;
    static constexpr int kDefaultCap = 200;

    int max_order = kDefaultMaxOrder;
    bool on_solutions = false;
    int degree = kDefaultDegree;  // nonlinear ansatz
    std::optional<int> order;     // representatives: maximal derivative order
    int cap = kDefaultCap;        // representatives: enumeration cap

    friend bool operator==(const Options&, const Options&) = default;
};

struct Equation {
    std::string name;
    Expr expr;

    friend bool operator==(const Equation&, const Equation&) = default;
};

struct Problem {
    JetSpace space;
    std::vector<Equation> equations;
    std::vector<Expr> center;  // empty, or one base-coordinate expression per field
    Task task;
    Options options;

    [[nodiscard]] std::vector<Expr> equation_exprs() const;
};

/// Structural equality (declarations, equations, center, task, options).
bool operator==(const Problem& a, const Problem& b);

struct ParseOverrides {
    std::optional<int> max_order;
};

/// Throws ParseError with the position of the offending token.
Problem parse(std::string_view text, const ParseOverrides& overrides = {});

/// Canonical text; parse(print(p)) == p.
std::string print(const Problem& p);

/// Parses `center <field> = <expr>;` statements against an existing problem.
std::vector<Expr> parse_center(std::string_view text, const Problem& p);

/// Words that cannot be used as identifiers.
const std::vector<std::string>& reserved_words();

}  // namespace varic
