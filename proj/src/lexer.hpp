#pragma once

#include <string>
#include <vector>

#include "asmw/errors.hpp"

namespace asmw::detail {

enum class Tok {
    Ident, Number, Var2, PVar1, PVar2, String,
    LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Comma, Dot, Semi, Colon, Assign,   // := is Assign
    Eq, Neq, Bang, Amp, Pipe, Arrow, Iff, Lt, Gt, Minus,
    // keyword tokens
    KwIf, KwThen, KwEndif, KwForall, KwChoose, KwWith, KwDo, KwEnddo,
    KwPar, KwEndpar, KwSeq, KwEndseq, KwExists, KwNone,
    KwUpd, KwConUSet, KwCon, KwWcon, KwScon, KwJoinable,
    KwPrimaryCarrier, KwSecondaryCarrier,
    Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string text;  // for Ident/Number/Var2/PVar1/PVar2/String: payload without sigils/quotes
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { tokenize(); }

    const std::vector<Token>& tokens() const { return toks_; }

private:
    void tokenize();
    [[noreturn]] void fail(const std::string& msg, int line, int col) const {
        throw SyntaxError(msg, line, col);
    }

    const std::string& src_;
    std::vector<Token> toks_;
};

const char* token_name(Tok t);

}  // namespace asmw::detail
