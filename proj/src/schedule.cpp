#include "dpmlc/spec.hpp"

#include <set>

namespace dpmlc {

namespace {

struct Token {
    enum class Kind { name, seq, par, lparen, rparen, end } kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
        } else if (c == '>') {
            out.push_back({Token::Kind::seq, ">", i++});
        } else if (c == '|') {
            out.push_back({Token::Kind::par, "|", i++});
        } else if (c == '(') {
            out.push_back({Token::Kind::lparen, "(", i++});
        } else if (c == ')') {
            out.push_back({Token::Kind::rparen, ")", i++});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            out.push_back({Token::Kind::name, text.substr(start, i - start), start});
        } else {
            throw SpecError("schedule: unexpected character '" + std::string(1, c) +
                            "' at position " + std::to_string(i));
        }
    }
    out.push_back({Token::Kind::end, "", text.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const std::vector<std::string>& models)
        : tokens_(std::move(tokens)), models_(models) {}

    ScheduleExpr parse() {
        ScheduleExpr e = expr();
        if (peek().kind == Token::Kind::rparen)
            throw SpecError("schedule: unbalanced ')' at position " + std::to_string(peek().pos));
        expect(Token::Kind::end, "end of input");
        return e;
    }

private:
    // expr := term ('>' term)*
    ScheduleExpr expr() {
        ScheduleExpr left = term();
        while (peek().kind == Token::Kind::seq) {
            advance();
            left = ScheduleExpr::seq(left, term());
        }
        return left;
    }

    // term := atom ('|' atom)*
    ScheduleExpr term() {
        ScheduleExpr left = atom();
        while (peek().kind == Token::Kind::par) {
            advance();
            left = ScheduleExpr::par(left, atom());
        }
        return left;
    }

    ScheduleExpr atom() {
        const Token& t = peek();
        if (t.kind == Token::Kind::name) {
            advance();
            bool declared = false;
            for (const auto& m : models_)
                if (m == t.text) declared = true;
            if (!declared)
                throw SpecError("schedule: undeclared model '" + t.text + "' at position " +
                                std::to_string(t.pos));
            if (!seen_.insert(t.text).second)
                throw SpecError("schedule: duplicate model '" + t.text + "' at position " +
                                std::to_string(t.pos));
            return ScheduleExpr::leaf(t.text);
        }
        if (t.kind == Token::Kind::lparen) {
            advance();
            ScheduleExpr inner = expr();
            if (peek().kind != Token::Kind::rparen)
                throw SpecError("schedule: unbalanced '(' opened at position " +
                                std::to_string(t.pos));
            advance();
            return inner;
        }
        throw SpecError("schedule: expected model name or '(' at position " +
                        std::to_string(t.pos));
    }

    const Token& peek() const { return tokens_[cursor_]; }
    void advance() { ++cursor_; }
    void expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k)
            throw SpecError("schedule: expected " + what + " at position " +
                            std::to_string(peek().pos));
        advance();
    }

    std::vector<Token> tokens_;
    const std::vector<std::string>& models_;
    std::set<std::string> seen_;
    std::size_t cursor_ = 0;
};

int copy_subtree(const ScheduleExpr& src, int node, ScheduleExpr& dst) {
    const auto& n = src.nodes[static_cast<std::size_t>(node)];
    ScheduleExpr::Node copy = n;
    if (n.left >= 0) copy.left = copy_subtree(src, n.left, dst);
    if (n.right >= 0) copy.right = copy_subtree(src, n.right, dst);
    dst.nodes.push_back(copy);
    return static_cast<int>(dst.nodes.size()) - 1;
}

ScheduleExpr combine(ScheduleOp op, const ScheduleExpr& a, const ScheduleExpr& b) {
    ScheduleExpr out;
    int l = copy_subtree(a, a.root, out);
    int r = copy_subtree(b, b.root, out);
    out.nodes.push_back({op, "", l, r});
    out.root = static_cast<int>(out.nodes.size()) - 1;
    return out;
}

bool equal_subtree(const ScheduleExpr& a, int an, const ScheduleExpr& b, int bn) {
    const auto& x = a.nodes[static_cast<std::size_t>(an)];
    const auto& y = b.nodes[static_cast<std::size_t>(bn)];
    if (x.op != y.op) return false;
    if (x.op == ScheduleOp::leaf) return x.model == y.model;
    return equal_subtree(a, x.left, b, y.left) && equal_subtree(a, x.right, b, y.right);
}

void leaves_inorder(const ScheduleExpr& e, int node, std::vector<std::string>& out) {
    const auto& n = e.nodes[static_cast<std::size_t>(node)];
    if (n.op == ScheduleOp::leaf) {
        out.push_back(n.model);
        return;
    }
    leaves_inorder(e, n.left, out);
    leaves_inorder(e, n.right, out);
}

// Renders with the minimal parentheses that reparse to the same tree.
std::string render(const ScheduleExpr& e, int node) {
    const auto& n = e.nodes[static_cast<std::size_t>(node)];
    if (n.op == ScheduleOp::leaf) return n.model;

    auto child = [&](int c, bool needs_parens) {
        std::string s = render(e, c);
        return needs_parens ? "(" + s + ")" : s;
    };
    const auto& l = e.nodes[static_cast<std::size_t>(n.left)];
    const auto& r = e.nodes[static_cast<std::size_t>(n.right)];
    if (n.op == ScheduleOp::seq) {
        // '>' is left-associative: a right-leaning Seq child needs parens
        return child(n.left, false) + " > " + child(n.right, r.op == ScheduleOp::seq);
    }
    // '|' binds tighter than '>': Seq children always need parens, and a
    // right-leaning Par child needs them to preserve shape
    return child(n.left, l.op == ScheduleOp::seq) + " | " +
           child(n.right, r.op != ScheduleOp::leaf);
}

}  // namespace

ScheduleExpr ScheduleExpr::leaf(const std::string& name) {
    ScheduleExpr e;
    e.nodes.push_back({ScheduleOp::leaf, name, -1, -1});
    e.root = 0;
    return e;
}

ScheduleExpr ScheduleExpr::seq(const ScheduleExpr& a, const ScheduleExpr& b) {
    return combine(ScheduleOp::seq, a, b);
}

ScheduleExpr ScheduleExpr::par(const ScheduleExpr& a, const ScheduleExpr& b) {
    return combine(ScheduleOp::par, a, b);
}

std::vector<std::string> ScheduleExpr::leaf_names() const {
    std::vector<std::string> out;
    if (root >= 0) leaves_inorder(*this, root, out);
    return out;
}

std::string ScheduleExpr::to_string() const {
    if (root < 0) return "";
    return render(*this, root);
}

bool ScheduleExpr::operator==(const ScheduleExpr& other) const {
    if (root < 0 || other.root < 0) return root == other.root;
    return equal_subtree(*this, root, other, other.root);
}

ScheduleExpr parse_schedule(const std::string& text, const std::vector<std::string>& models) {
    return Parser(lex(text), models).parse();
}

}  // namespace dpmlc
