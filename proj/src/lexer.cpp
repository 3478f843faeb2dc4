#include "lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace asmw::detail {

namespace {

const std::unordered_map<std::string, Tok>& keywords() {
    static const std::unordered_map<std::string, Tok> kw = {
        {"if", Tok::KwIf},         {"then", Tok::KwThen},     {"endif", Tok::KwEndif},
        {"forall", Tok::KwForall}, {"choose", Tok::KwChoose}, {"with", Tok::KwWith},
        {"do", Tok::KwDo},         {"enddo", Tok::KwEnddo},   {"par", Tok::KwPar},
        {"endpar", Tok::KwEndpar}, {"seq", Tok::KwSeq},       {"endseq", Tok::KwEndseq},
        {"exists", Tok::KwExists}, {"none", Tok::KwNone},     {"upd", Tok::KwUpd},
        {"conUSet", Tok::KwConUSet}, {"con", Tok::KwCon},     {"wcon", Tok::KwWcon},
        {"scon", Tok::KwScon},     {"joinable", Tok::KwJoinable},
    };
    return kw;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

void Lexer::tokenize() {
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src_[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    auto push = [&](Tok t, std::string text, int l, int c) {
        toks_.push_back(Token{t, std::move(text), l, c});
    };

    while (i < src_.size()) {
        char c = src_[i];
        int l = line, co = col;
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src_.size() && src_[i + 1] == '/') {
            while (i < src_.size() && src_[i] != '\n') advance(1);
            continue;
        }
        if (ident_start(c)) {
            size_t j = i;
            while (j < src_.size() && ident_char(src_[j])) ++j;
            std::string word = src_.substr(i, j - i);
            advance(j - i);
            // primary-carrier / secondary-carrier section keywords
            if ((word == "primary" || word == "secondary") && i + 8 <= src_.size() &&
                src_.compare(i, 8, "-carrier") == 0 &&
                (i + 8 == src_.size() || !ident_char(src_[i + 8]))) {
                advance(8);
                push(word == "primary" ? Tok::KwPrimaryCarrier : Tok::KwSecondaryCarrier, word, l, co);
                continue;
            }
            auto it = keywords().find(word);
            if (it != keywords().end())
                push(it->second, word, l, co);
            else
                push(Tok::Ident, word, l, co);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
            std::string num = src_.substr(i, j - i);
            advance(j - i);
            push(Tok::Number, num, l, co);
            continue;
        }
        if (c == '$') {
            if (i + 1 >= src_.size() || !ident_start(src_[i + 1]))
                fail("expected identifier after '$'", l, co);
            size_t j = i + 1;
            while (j < src_.size() && ident_char(src_[j])) ++j;
            std::string name = src_.substr(i + 1, j - i - 1);
            advance(j - i);
            push(Tok::Var2, name, l, co);
            continue;
        }
        if (c == '%') {
            bool two = i + 1 < src_.size() && src_[i + 1] == '%';
            size_t start = i + (two ? 2 : 1);
            if (start >= src_.size() || !ident_start(src_[start]))
                fail("expected identifier after '%'", l, co);
            size_t j = start;
            while (j < src_.size() && ident_char(src_[j])) ++j;
            std::string name = src_.substr(start, j - start);
            advance(j - i);
            push(two ? Tok::PVar2 : Tok::PVar1, name, l, co);
            continue;
        }
        if (c == '"') {
            size_t j = i + 1;
            while (j < src_.size() && src_[j] != '"' && src_[j] != '\n') ++j;
            if (j >= src_.size() || src_[j] != '"') fail("unterminated string", l, co);
            std::string text = src_.substr(i + 1, j - i - 1);
            advance(j - i + 1);
            push(Tok::String, text, l, co);
            continue;
        }
        auto two_char = [&](const char* pat, Tok t) {
            if (c == pat[0] && i + 1 < src_.size() && src_[i + 1] == pat[1]) {
                advance(2);
                push(t, pat, l, co);
                return true;
            }
            return false;
        };
        if (two_char(":=", Tok::Assign)) continue;
        if (two_char("!=", Tok::Neq)) continue;
        if (two_char("->", Tok::Arrow)) continue;
        if (c == '<' && i + 2 < src_.size() && src_[i + 1] == '-' && src_[i + 2] == '>') {
            advance(3);
            push(Tok::Iff, "<->", l, co);
            continue;
        }
        Tok t;
        switch (c) {
            case '(': t = Tok::LParen; break;
            case ')': t = Tok::RParen; break;
            case '[': t = Tok::LBracket; break;
            case ']': t = Tok::RBracket; break;
            case '{': t = Tok::LBrace; break;
            case '}': t = Tok::RBrace; break;
            case ',': t = Tok::Comma; break;
            case '.': t = Tok::Dot; break;
            case ';': t = Tok::Semi; break;
            case ':': t = Tok::Colon; break;
            case '=': t = Tok::Eq; break;
            case '!': t = Tok::Bang; break;
            case '&': t = Tok::Amp; break;
            case '|': t = Tok::Pipe; break;
            case '<': t = Tok::Lt; break;
            case '>': t = Tok::Gt; break;
            case '-': t = Tok::Minus; break;
            default:
                fail(std::string("unexpected character '") + c + "'", l, co);
        }
        advance(1);
        push(t, std::string(1, c), l, co);
    }
    toks_.push_back(Token{Tok::Eof, "", line, col});
}

const char* token_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::Var2: return "$-variable";
        case Tok::PVar1: return "%-variable";
        case Tok::PVar2: return "%%-variable";
        case Tok::String: return "string";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Semi: return "';'";
        case Tok::Colon: return "':'";
        case Tok::Assign: return "':='";
        case Tok::Eq: return "'='";
        case Tok::Neq: return "'!='";
        case Tok::Bang: return "'!'";
        case Tok::Amp: return "'&'";
        case Tok::Pipe: return "'|'";
        case Tok::Arrow: return "'->'";
        case Tok::Iff: return "'<->'";
        case Tok::Lt: return "'<'";
        case Tok::Gt: return "'>'";
        case Tok::Minus: return "'-'";
        case Tok::KwIf: return "'if'";
        case Tok::KwThen: return "'then'";
        case Tok::KwEndif: return "'endif'";
        case Tok::KwForall: return "'forall'";
        case Tok::KwChoose: return "'choose'";
        case Tok::KwWith: return "'with'";
        case Tok::KwDo: return "'do'";
        case Tok::KwEnddo: return "'enddo'";
        case Tok::KwPar: return "'par'";
        case Tok::KwEndpar: return "'endpar'";
        case Tok::KwSeq: return "'seq'";
        case Tok::KwEndseq: return "'endseq'";
        case Tok::KwExists: return "'exists'";
        case Tok::KwNone: return "'none'";
        case Tok::KwUpd: return "'upd'";
        case Tok::KwConUSet: return "'conUSet'";
        case Tok::KwCon: return "'con'";
        case Tok::KwWcon: return "'wcon'";
        case Tok::KwScon: return "'scon'";
        case Tok::KwJoinable: return "'joinable'";
        case Tok::KwPrimaryCarrier: return "'primary-carrier'";
        case Tok::KwSecondaryCarrier: return "'secondary-carrier'";
        case Tok::Eof: return "end of input";
    }
    return "?";
}

}  // namespace asmw::detail
