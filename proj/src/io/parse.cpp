#include "ebeq/io/parse.hpp"

#include "ebeq/core/errors.hpp"
#include "ebeq/core/ops.hpp"

#include <cctype>

namespace ebeq {

SymbolTable::SymbolTable()
{
    for (const char* v : {"y", "z", "t", "x"}) variables_.insert(v);
    for (const char* f : {"R", "S", "L", "J", "w"}) add_jet_function(JetFunction{f, target_chart()});
    add_jet_function(JetFunction{"h", target_chart(), 0b10});
    add_jet_function(JetFunction{"u", source_chart()});
}

void SymbolTable::add_variable(const std::string& name)
{
    variables_.insert(name);
}

void SymbolTable::add_jet_function(const JetFunction& fn)
{
    jets_[fn.name] = fn;
}

const JetFunction* SymbolTable::jet_function(std::string_view name) const
{
    auto it = jets_.find(name);
    return it == jets_.end() ? nullptr : &it->second;
}

bool SymbolTable::is_variable(std::string_view name) const
{
    return variables_.count(name) != 0;
}

const SymbolTable& default_symbols()
{
    static const SymbolTable table;
    return table;
}

namespace {

class Parser {
public:
    Parser(std::string_view text, const SymbolTable& table) : text_(text), table_(table) {}

    Expr run()
    {
        Expr e = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr()
    {
        Expr acc = term();
        for (;;) {
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

    Expr term()
    {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) acc = acc * unary();
            else if (accept('/')) acc = acc / unary();
            else return acc;
        }
    }

    Expr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (!accept('^')) return base;
        Expr exponent = unary_power();
        auto q = canon::constant_value(to_form(exponent));
        if (!q) fail("exponent must be a rational constant");
        if (!mpz_fits_slong_p(q->get_num_mpz_t()) || !mpz_fits_slong_p(q->get_den_mpz_t()))
            fail("exponent too large");
        return pow(base, Frac(q->get_num().get_si(), q->get_den().get_si()));
    }

    // Right operand of ^: allows a sign and right-associative chains.
    Expr unary_power()
    {
        if (accept('-')) return -unary_power();
        return power();
    }

    Expr primary()
    {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) return identifier();
        fail(std::string("unexpected '") + c + "'");
    }

    Expr number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        mpz_class den = 1;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
                digits += text_[pos_++];
                den *= 10;
            }
        }
        if (digits.empty()) fail("malformed number");
        Q q(mpz_class(digits), den);
        q.canonicalize();
        return Expr(q);
    }

    std::string name()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<Expr> arguments()
    {
        std::vector<Expr> args;
        if (accept(')')) return args;
        do {
            args.push_back(expr());
        } while (accept(','));
        expect(')');
        return args;
    }

    Expr identifier()
    {
        const std::string id = name();
        if (id == "D" && pos_ < text_.size() && text_[pos_] == '[') {
            ++pos_;
            skip();
            const std::string dir = name();
            if (!table_.is_variable(dir)) fail("D[...] needs an independent variable");
            expect(']');
            expect('(');
            Expr inner = expr();
            expect(')');
            return total_derivative(inner, dir);
        }

        std::vector<int> tags;
        bool tagged = false;
        if (pos_ < text_.size() && text_[pos_] == '\'') {
            tagged = true;
            int primes = 0;
            while (pos_ < text_.size() && text_[pos_] == '\'') {
                ++primes;
                ++pos_;
            }
            if (primes == 1 && pos_ < text_.size() && text_[pos_] == '[') {
                ++pos_;
                do {
                    skip();
                    const std::size_t start = pos_;
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
                    if (start == pos_) fail("expected a derivative order");
                    tags.push_back(std::stoi(std::string(text_.substr(start, pos_ - start))));
                } while (accept(','));
                expect(']');
            } else {
                tags.push_back(primes);
            }
        }

        skip();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            std::vector<Expr> args = arguments();
            if (FuncSym::is_builtin(id)) {
                if (tagged) fail("derivative tags are not allowed on " + id);
                if (args.size() != 1) fail(id + " takes one argument");
                return Expr::apply(FuncSym{id, {0}}, std::move(args));
            }
            if (table_.jet_function(id) != nullptr || table_.is_variable(id)) fail(id + " cannot be applied");
            if (args.empty()) fail("application of " + id + " needs arguments");
            FuncSym fn = FuncSym::generic(id, static_cast<int>(args.size()));
            if (tagged) {
                if (tags.size() != args.size()) fail("derivative tags of " + id + " do not match its arguments");
                fn.deriv = tags;
            }
            return Expr::apply(std::move(fn), std::move(args));
        }
        if (tagged) fail("derivative tags need an application");

        if (table_.is_variable(id)) return var(id);
        const auto underscore = id.find('_');
        const std::string head = id.substr(0, underscore);
        if (const JetFunction* fn = table_.jet_function(head)) {
            MultiIndex k{0, 0};
            if (underscore != std::string::npos) {
                const std::string suffix = id.substr(underscore + 1);
                if (suffix.empty()) fail("empty jet suffix on " + head);
                for (char ch : suffix) {
                    const int p = fn->chart.position(std::string(1, ch));
                    if (p < 0) fail("'" + std::string(1, ch) + "' is not a variable of " + head);
                    k[p] += 1;
                }
            }
            if (!fn->admits(k)) fail(id + " differentiates " + head + " in a variable it does not depend on");
            return jet(*fn, k);
        }
        return param(id);
    }

    std::string_view text_;
    const SymbolTable& table_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable& table)
{
    Parser p(text, table);
    return p.run();
}

}  // namespace ebeq
