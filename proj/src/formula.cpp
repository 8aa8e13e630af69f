#include "bbfs/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bbfs {

namespace {

void require(bool ok, const char* msg) {
    if (!ok)
        throw Error(msg);
}

} // namespace

FormulaPtr Formula::make_const(bool value) {
    return FormulaPtr(new Formula(NodeKind::Const, value, {}, {}));
}

FormulaPtr Formula::make_ref(std::string name) {
    require(!name.empty(), "variable name must be nonempty");
    return FormulaPtr(new Formula(NodeKind::Ref, false, std::move(name), {}));
}

FormulaPtr Formula::make_not(FormulaPtr child) {
    require(child != nullptr, "not: null child");
    return FormulaPtr(new Formula(NodeKind::Not, false, {}, {std::move(child)}));
}

FormulaPtr Formula::make_and(std::vector<FormulaPtr> children) {
    require(!children.empty(), "and: needs at least one child");
    return FormulaPtr(new Formula(NodeKind::And, false, {}, std::move(children)));
}

FormulaPtr Formula::make_or(std::vector<FormulaPtr> children) {
    require(!children.empty(), "or: needs at least one child");
    return FormulaPtr(new Formula(NodeKind::Or, false, {}, std::move(children)));
}

FormulaPtr Formula::make_xor(std::vector<FormulaPtr> children) {
    require(children.size() >= 2, "xor: needs at least two children");
    return FormulaPtr(new Formula(NodeKind::Xor, false, {}, std::move(children)));
}

FormulaPtr Formula::make_iff(FormulaPtr lhs, FormulaPtr rhs) {
    return FormulaPtr(new Formula(NodeKind::Iff, false, {}, {std::move(lhs), std::move(rhs)}));
}

FormulaPtr Formula::make_implies(FormulaPtr lhs, FormulaPtr rhs) {
    return FormulaPtr(new Formula(NodeKind::Implies, false, {}, {std::move(lhs), std::move(rhs)}));
}

std::vector<std::string> BfsSpec::input_names() const {
    std::vector<std::string> out;
    out.reserve(inputs.size());
    for (const auto& v : inputs)
        out.push_back(v.name);
    return out;
}

std::vector<std::string> BfsSpec::output_names() const {
    std::vector<std::string> out;
    out.reserve(outputs.size());
    for (const auto& v : outputs)
        out.push_back(v.name);
    return out;
}

void BfsSpec::validate() const {
    std::set<std::string> declared;
    for (const auto& v : inputs)
        if (!declared.insert(v.name).second)
            throw ParseError(ParseError::Code::DuplicateDeclaration,
                             "duplicate variable '" + v.name + "'", 0, 0);
    for (const auto& v : outputs)
        if (!declared.insert(v.name).second)
            throw ParseError(ParseError::Code::DuplicateDeclaration,
                             "duplicate variable '" + v.name + "'", 0, 0);
    if (declared.empty())
        throw ParseError(ParseError::Code::EmptyOutputs, "spec declares no variables", 0, 0);
    if (!spec)
        throw ParseError(ParseError::Code::Syntax, "spec formula missing", 0, 0);
    for (const auto& name : collect_vars(spec))
        if (!declared.count(name))
            throw ParseError(ParseError::Code::UnknownVariable,
                             "unknown variable '" + name + "'", 0, 0);
}

bool eval(const FormulaPtr& f, const VarAssignment& assignment) {
    switch (f->kind()) {
    case NodeKind::Const:
        return f->value();
    case NodeKind::Ref: {
        auto it = assignment.find(f->var());
        if (it == assignment.end())
            throw MissingAssignmentError("no assignment for variable '" + f->var() + "'");
        return it->second;
    }
    case NodeKind::Not:
        return !eval(f->children()[0], assignment);
    case NodeKind::And:
        for (const auto& c : f->children())
            if (!eval(c, assignment))
                return false;
        return true;
    case NodeKind::Or:
        for (const auto& c : f->children())
            if (eval(c, assignment))
                return true;
        return false;
    case NodeKind::Xor: {
        bool parity = false;
        for (const auto& c : f->children())
            parity ^= eval(c, assignment);
        return parity;
    }
    case NodeKind::Iff:
        return eval(f->children()[0], assignment) == eval(f->children()[1], assignment);
    case NodeKind::Implies:
        return !eval(f->children()[0], assignment) || eval(f->children()[1], assignment);
    }
    throw Error("eval: corrupt node");
}

namespace {

FormulaPtr substitute_rec(const FormulaPtr& f, const std::map<std::string, FormulaPtr>& bindings) {
    switch (f->kind()) {
    case NodeKind::Const:
        return f;
    case NodeKind::Ref: {
        auto it = bindings.find(f->var());
        return it == bindings.end() ? f : it->second;
    }
    default: {
        std::vector<FormulaPtr> kids;
        kids.reserve(f->children().size());
        bool changed = false;
        for (const auto& c : f->children()) {
            kids.push_back(substitute_rec(c, bindings));
            changed |= kids.back() != c;
        }
        if (!changed)
            return f;
        switch (f->kind()) {
        case NodeKind::Not: return Formula::make_not(kids[0]);
        case NodeKind::And: return Formula::make_and(std::move(kids));
        case NodeKind::Or: return Formula::make_or(std::move(kids));
        case NodeKind::Xor: return Formula::make_xor(std::move(kids));
        case NodeKind::Iff: return Formula::make_iff(kids[0], kids[1]);
        case NodeKind::Implies: return Formula::make_implies(kids[0], kids[1]);
        default: throw Error("substitute: corrupt node");
        }
    }
    }
}

} // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, FormulaPtr>& bindings) {
    for (const auto& [name, repl] : bindings) {
        (void)name;
        for (const auto& ref : collect_vars(repl))
            if (bindings.count(ref))
                throw RecursiveBindingError("binding references bound variable '" + ref + "'");
    }
    return substitute_rec(f, bindings);
}

void collect_vars(const FormulaPtr& f, std::set<std::string>& out) {
    if (f->kind() == NodeKind::Ref) {
        out.insert(f->var());
        return;
    }
    for (const auto& c : f->children())
        collect_vars(c, out);
}

std::set<std::string> collect_vars(const FormulaPtr& f) {
    std::set<std::string> out;
    collect_vars(f, out);
    return out;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get())
        return true;
    if (a->kind() != b->kind())
        return false;
    switch (a->kind()) {
    case NodeKind::Const:
        return a->value() == b->value();
    case NodeKind::Ref:
        return a->var() == b->var();
    default: {
        if (a->children().size() != b->children().size())
            return false;
        for (size_t i = 0; i < a->children().size(); ++i)
            if (!structurally_equal(a->children()[i], b->children()[i]))
                return false;
        return true;
    }
    }
}

namespace {

void print_rec(const FormulaPtr& f, std::string& out) {
    switch (f->kind()) {
    case NodeKind::Const:
        out += f->value() ? "true" : "false";
        return;
    case NodeKind::Ref:
        out += f->var();
        return;
    default: {
        const char* head = nullptr;
        switch (f->kind()) {
        case NodeKind::Not: head = "not"; break;
        case NodeKind::And: head = "and"; break;
        case NodeKind::Or: head = "or"; break;
        case NodeKind::Xor: head = "xor"; break;
        case NodeKind::Iff: head = "iff"; break;
        case NodeKind::Implies: head = "=>"; break;
        default: throw Error("print: corrupt node");
        }
        out += '(';
        out += head;
        for (const auto& c : f->children()) {
            out += ' ';
            print_rec(c, out);
        }
        out += ')';
    }
    }
}

} // namespace

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    print_rec(f, out);
    return out;
}

// ---------------------------------------------------------------------------
// .bfs parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { LParen, RParen, Atom, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    Lexer(const std::string& text, int start_line) : text_(text), line_(start_line) {}

    Token next() {
        skip_space();
        if (pos_ >= text_.size())
            return {Token::Kind::End, "", line_, col_};
        int line = line_, col = col_;
        char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::Kind::LParen, "(", line, col};
        }
        if (c == ')') {
            advance();
            return {Token::Kind::RParen, ")", line, col};
        }
        std::string atom;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '#') {
            atom += text_[pos_];
            advance();
        }
        if (atom.empty())
            throw ParseError(ParseError::Code::Syntax, "unexpected character", line, col);
        return {Token::Kind::Atom, atom, line, col};
    }

private:
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
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_;
    int col_ = 1;
};

bool valid_identifier(const std::string& s) {
    if (s.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

class SexprParser {
public:
    SexprParser(Lexer lexer, const std::set<std::string>& known)
        : lexer_(std::move(lexer)), known_(known) {
        bump();
    }

    FormulaPtr parse_toplevel() {
        FormulaPtr f = parse_expr();
        if (tok_.kind != Token::Kind::End)
            throw ParseError(ParseError::Code::Syntax, "trailing content after spec formula",
                             tok_.line, tok_.col);
        return f;
    }

private:
    void bump() { tok_ = lexer_.next(); }

    FormulaPtr parse_expr() {
        if (tok_.kind == Token::Kind::Atom) {
            Token atom = tok_;
            bump();
            if (atom.text == "true")
                return Formula::make_const(true);
            if (atom.text == "false")
                return Formula::make_const(false);
            if (!valid_identifier(atom.text))
                throw ParseError(ParseError::Code::Syntax,
                                 "invalid identifier '" + atom.text + "'", atom.line, atom.col);
            if (!known_.count(atom.text))
                throw ParseError(ParseError::Code::UnknownVariable,
                                 "unknown variable '" + atom.text + "'", atom.line, atom.col);
            return Formula::make_ref(atom.text);
        }
        if (tok_.kind != Token::Kind::LParen)
            throw ParseError(ParseError::Code::Syntax, "expected formula", tok_.line, tok_.col);
        Token open = tok_;
        bump();
        if (tok_.kind != Token::Kind::Atom)
            throw ParseError(ParseError::Code::Syntax, "expected operator after '('",
                             tok_.line, tok_.col);
        std::string op = tok_.text;
        bump();
        std::vector<FormulaPtr> args;
        while (tok_.kind != Token::Kind::RParen) {
            if (tok_.kind == Token::Kind::End)
                throw ParseError(ParseError::Code::Syntax, "unclosed '('", open.line, open.col);
            args.push_back(parse_expr());
        }
        bump(); // ')'
        auto arity = [&](size_t lo, size_t hi) {
            if (args.size() < lo || args.size() > hi)
                throw ParseError(ParseError::Code::Syntax,
                                 "operator '" + op + "' has wrong arity", open.line, open.col);
        };
        constexpr size_t kAny = static_cast<size_t>(-1);
        if (op == "not") {
            arity(1, 1);
            return Formula::make_not(args[0]);
        }
        if (op == "and") {
            arity(1, kAny);
            return Formula::make_and(std::move(args));
        }
        if (op == "or") {
            arity(1, kAny);
            return Formula::make_or(std::move(args));
        }
        if (op == "xor") {
            arity(2, kAny);
            return Formula::make_xor(std::move(args));
        }
        if (op == "iff") {
            arity(2, 2);
            return Formula::make_iff(args[0], args[1]);
        }
        if (op == "=>") {
            arity(2, 2);
            return Formula::make_implies(args[0], args[1]);
        }
        throw ParseError(ParseError::Code::Syntax, "unknown operator '" + op + "'",
                         open.line, open.col);
    }

    Lexer lexer_;
    const std::set<std::string>& known_;
    Token tok_{Token::Kind::End, "", 0, 0};
};

std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string w;
    while (is >> w)
        out.push_back(w);
    return out;
}

} // namespace

FormulaPtr parse_sexpr(const std::string& text, const std::set<std::string>& known_vars) {
    SexprParser parser(Lexer(text, 1), known_vars);
    return parser.parse_toplevel();
}

BfsSpec parse_spec(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line))
            lines.push_back(line);
    }

    BfsSpec spec;
    std::set<std::string> declared;
    bool saw_inputs = false, saw_outputs = false;
    size_t i = 0;

    auto declare = [&](const std::string& name, VarKind kind, int line) {
        if (!valid_identifier(name))
            throw ParseError(ParseError::Code::Syntax, "invalid variable name '" + name + "'",
                             line, 1);
        if (!declared.insert(name).second)
            throw ParseError(ParseError::Code::DuplicateDeclaration,
                             "duplicate variable '" + name + "'", line, 1);
        (kind == VarKind::Input ? spec.inputs : spec.outputs).push_back({name, kind});
    };

    for (; i < lines.size(); ++i) {
        std::string line = lines[i];
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto words = split_words(line);
        int lno = static_cast<int>(i) + 1;
        if (words[0] == "inputs") {
            if (saw_inputs)
                throw ParseError(ParseError::Code::Syntax, "duplicate 'inputs' line", lno, 1);
            saw_inputs = true;
            for (size_t w = 1; w < words.size(); ++w)
                declare(words[w], VarKind::Input, lno);
        } else if (words[0] == "outputs") {
            if (!saw_inputs)
                throw ParseError(ParseError::Code::Syntax, "'outputs' before 'inputs'", lno, 1);
            if (saw_outputs)
                throw ParseError(ParseError::Code::Syntax, "duplicate 'outputs' line", lno, 1);
            saw_outputs = true;
            for (size_t w = 1; w < words.size(); ++w)
                declare(words[w], VarKind::Output, lno);
        } else if (words[0] == "spec") {
            if (!saw_inputs || !saw_outputs)
                throw ParseError(ParseError::Code::Syntax,
                                 "'spec' requires 'inputs' and 'outputs' lines first", lno, 1);
            if (declared.empty())
                throw ParseError(ParseError::Code::EmptyOutputs,
                                 "spec declares no variables", lno, 1);
            // The spec body is everything after the keyword, through EOF.
            size_t kw = line.find("spec");
            std::string body = line.substr(kw + 4);
            for (size_t j = i + 1; j < lines.size(); ++j) {
                body += '\n';
                body += lines[j];
            }
            Lexer lexer(body, lno);
            SexprParser parser(std::move(lexer), declared);
            spec.spec = parser.parse_toplevel();
            spec.validate();
            return spec;
        } else {
            throw ParseError(ParseError::Code::Syntax,
                             "expected 'inputs', 'outputs' or 'spec', got '" + words[0] + "'",
                             lno, 1);
        }
    }
    throw ParseError(ParseError::Code::Syntax, "missing 'spec' line",
                     static_cast<int>(lines.size()), 1);
}

} // namespace bbfs
