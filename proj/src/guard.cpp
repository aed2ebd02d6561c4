#include "spnperf/guard.hpp"

#include <cctype>

#include "spnperf/errors.hpp"

namespace spnperf {

const char* to_symbol(GuardRel r) {
    switch (r) {
        case GuardRel::Lt: return "<";
        case GuardRel::Le: return "<=";
        case GuardRel::Eq: return "=";
        case GuardRel::Ge: return ">=";
        case GuardRel::Gt: return ">";
    }
    return "?";
}

// Recursive-descent parser over the grammar in the header.
class GuardParser {
public:
    GuardParser(std::string_view text, const std::function<int(std::string_view)>& lookup)
        : text_(text), lookup_(lookup) {}

    GuardExpr run() {
        GuardExpr g;
        g.root_ = parse_or(g);
        skip_ws();
        if (pos_ != text_.size())
            throw GuardParseError("unexpected trailing input in guard", pos_);
        return g;
    }

private:
    std::string_view text_;
    const std::function<int(std::string_view)>& lookup_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool match_keyword(std::string_view kw) {
        skip_ws();
        if (text_.substr(pos_, kw.size()) != kw) return false;
        // keyword must not continue as an identifier (guards against ids like "ORDER")
        std::size_t after = pos_ + kw.size();
        if (after < text_.size()) {
            char c = text_[after];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        pos_ = after;
        return true;
    }

    int parse_or(GuardExpr& g) {
        int left = parse_and(g);
        while (match_keyword("OR")) {
            int right = parse_and(g);
            g.nodes_.push_back({GuardExpr::Node::Or, left, right});
            left = static_cast<int>(g.nodes_.size()) - 1;
        }
        return left;
    }

    int parse_and(GuardExpr& g) {
        int left = parse_unary(g);
        while (match_keyword("AND")) {
            int right = parse_unary(g);
            g.nodes_.push_back({GuardExpr::Node::And, left, right});
            left = static_cast<int>(g.nodes_.size()) - 1;
        }
        return left;
    }

    int parse_unary(GuardExpr& g) {
        if (match_keyword("NOT")) {
            int child = parse_unary(g);
            g.nodes_.push_back({GuardExpr::Node::Not, child, -1});
            return static_cast<int>(g.nodes_.size()) - 1;
        }
        skip_ws();
        if (pos_ >= text_.size()) throw GuardParseError("guard ended where a term was expected", pos_);
        if (text_[pos_] == '(') {
            ++pos_;
            int inner = parse_or(g);
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw GuardParseError("missing closing parenthesis", pos_);
            ++pos_;
            return inner;
        }
        if (text_[pos_] == '#') return parse_atom(g);
        throw GuardParseError("expected '#place relop int', 'NOT' or '('", pos_);
    }

    int parse_atom(GuardExpr& g) {
        ++pos_;  // '#'
        std::size_t id_start = pos_;
        if (pos_ >= text_.size() ||
            !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            throw GuardParseError("expected place identifier after '#'", pos_);
        ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string id(text_.substr(id_start, pos_ - id_start));

        skip_ws();
        GuardRel rel;
        if (pos_ >= text_.size()) throw GuardParseError("expected relational operator", pos_);
        char c = text_[pos_];
        if (c == '>') {
            rel = (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') ? (pos_ += 2, GuardRel::Ge)
                                                                      : (++pos_, GuardRel::Gt);
        } else if (c == '<') {
            rel = (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') ? (pos_ += 2, GuardRel::Le)
                                                                      : (++pos_, GuardRel::Lt);
        } else if (c == '=') {
            ++pos_;
            rel = GuardRel::Eq;
        } else {
            throw GuardParseError("expected relational operator", pos_);
        }

        skip_ws();
        std::size_t num_start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (num_start == pos_) throw GuardParseError("expected integer constant", pos_);
        std::int64_t value = 0;
        for (std::size_t i = num_start; i < pos_; ++i) {
            value = value * 10 + (text_[i] - '0');
            if (value > 2147483647LL) throw GuardParseError("integer constant out of range", num_start);
        }

        int place = lookup_(id);
        if (place < 0)
            throw UnknownIdError("guard references unknown place '" + id + "'", id);

        g.atoms_.push_back({place, rel, value, std::move(id)});
        g.nodes_.push_back({GuardExpr::Node::AtomRef, static_cast<int>(g.atoms_.size()) - 1, -1});
        return static_cast<int>(g.nodes_.size()) - 1;
    }
};

GuardExpr GuardExpr::parse(std::string_view text,
                           const std::function<int(std::string_view)>& place_index) {
    return GuardParser(text, place_index).run();
}

bool GuardExpr::eval_node(int n, const std::vector<std::int32_t>& m) const {
    const Node& node = nodes_[static_cast<std::size_t>(n)];
    switch (node.kind) {
        case Node::AtomRef: {
            const Atom& a = atoms_[static_cast<std::size_t>(node.a)];
            std::int64_t tokens = m[static_cast<std::size_t>(a.place)];
            switch (a.rel) {
                case GuardRel::Lt: return tokens < a.value;
                case GuardRel::Le: return tokens <= a.value;
                case GuardRel::Eq: return tokens == a.value;
                case GuardRel::Ge: return tokens >= a.value;
                case GuardRel::Gt: return tokens > a.value;
            }
            return false;
        }
        case Node::And: return eval_node(node.a, m) && eval_node(node.b, m);
        case Node::Or: return eval_node(node.a, m) || eval_node(node.b, m);
        case Node::Not: return !eval_node(node.a, m);
    }
    return false;
}

bool GuardExpr::eval(const std::vector<std::int32_t>& marking) const {
    return root_ >= 0 && eval_node(root_, marking);
}

void GuardExpr::print_node(int n, std::string& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(n)];
    switch (node.kind) {
        case Node::AtomRef: {
            const Atom& a = atoms_[static_cast<std::size_t>(node.a)];
            out += '#';
            out += a.place_id;
            out += to_symbol(a.rel);
            out += std::to_string(a.value);
            break;
        }
        case Node::And:
        case Node::Or:
            out += '(';
            print_node(node.a, out);
            out += ')';
            out += node.kind == Node::And ? "AND" : "OR";
            out += '(';
            print_node(node.b, out);
            out += ')';
            break;
        case Node::Not:
            out += "NOT(";
            print_node(node.a, out);
            out += ')';
            break;
    }
}

std::string GuardExpr::to_string() const {
    std::string out;
    if (root_ >= 0) print_node(root_, out);
    return out;
}

std::vector<int> GuardExpr::referenced_places() const {
    std::vector<int> out;
    out.reserve(atoms_.size());
    for (const Atom& a : atoms_) out.push_back(a.place);
    return out;
}

}  // namespace spnperf
