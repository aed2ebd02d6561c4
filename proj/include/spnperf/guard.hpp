#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace spnperf {

enum class GuardRel { Lt, Le, Eq, Ge, Gt };

// Boolean guard over a marking. Atoms compare one place's token count against a
// constant: `#PLACE >= 3`. Combined with AND / OR / NOT and parentheses.
//
// Grammar (whitespace-insensitive, keywords uppercase):
//   Or    := And ('OR' And)*
//   And   := Unary ('AND' Unary)*
//   Unary := 'NOT' Unary | '(' Or ')' | '#' id relop int
//   relop := '>' | '>=' | '=' | '<' | '<='
//   id    := [A-Za-z_][A-Za-z0-9_]*
class GuardExpr {
public:
    // Resolves place ids through `place_index` (returns -1 for unknown ids).
    // Throws GuardParseError (with character position) on syntax errors and
    // UnknownIdError naming the id when a place does not exist.
    static GuardExpr parse(std::string_view text,
                           const std::function<int(std::string_view)>& place_index);

    bool eval(const std::vector<std::int32_t>& marking) const;

    // Fully parenthesized canonical form; reparses to a structurally equal tree.
    std::string to_string() const;

    bool operator==(const GuardExpr& other) const = default;

    // Indices of all places the guard mentions (no duplicates removed).
    std::vector<int> referenced_places() const;

private:
    struct Atom {
        int place = -1;
        GuardRel rel = GuardRel::Eq;
        std::int64_t value = 0;
        std::string place_id;
        bool operator==(const Atom&) const = default;
    };
    struct Node {
        enum Kind : std::uint8_t { AtomRef, And, Or, Not } kind = AtomRef;
        int a = -1;  // atom index for AtomRef, left/only child otherwise
        int b = -1;  // right child for And/Or
        bool operator==(const Node&) const = default;
    };

    std::vector<Atom> atoms_;
    std::vector<Node> nodes_;
    int root_ = -1;

    bool eval_node(int n, const std::vector<std::int32_t>& m) const;
    void print_node(int n, std::string& out) const;
    friend class GuardParser;
};

const char* to_symbol(GuardRel r);

}  // namespace spnperf
