// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/acsl.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace arcs {

namespace {

std::string renderAtom(const SrcAtom& a) {
    switch (a.kind) {
    case SrcAtom::Kind::Var: return a.name;
    case SrcAtom::Kind::OldVar: return "\\old(" + a.name + ")";
    case SrcAtom::Kind::Result: return "\\result";
    case SrcAtom::Kind::Cell: return a.name + "[" + renderLin(a.args[0]) + "]";
    case SrcAtom::Kind::OldCell: return "\\old(" + a.name + "[" + renderLin(a.args[0]) + "])";
    case SrcAtom::Kind::Len: return "len_" + a.name;
    case SrcAtom::Kind::Bound: return a.name;
    case SrcAtom::Kind::Prod: {
        std::string out;
        for (size_t i = 0; i < a.args.size(); ++i) {
            if (i)
                out += "*";
            const SrcLin& f = a.args[i];
            bool simple = f.parts.size() == 1 && f.k == 0 && f.parts[0].first == 1;
            out += simple ? renderAtom(f.parts[0].second) : "(" + renderLin(f) + ")";
        }
        return out;
    }
    }
    return "?";
}

const char* relText(CmpOp op) {
    switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ne: return "!=";
    case CmpOp::Eq: return "==";
    }
    return "?";
}

bool needsParens(const SrcFormula& f) {
    return f.kind == SrcFormula::Kind::Or || f.kind == SrcFormula::Kind::Forall ||
           f.kind == SrcFormula::Kind::Exists || f.kind == SrcFormula::Kind::And;
}

} // namespace

std::string renderLin(const SrcLin& lin) {
    if (lin.parts.empty())
        return std::to_string(lin.k);
    std::ostringstream os;
    bool first = true;
    for (const auto& [coeff, atom] : lin.parts) {
        std::string at = renderAtom(atom);
        if (first) {
            if (coeff == -1)
                os << "-";
            else if (coeff != 1)
                os << coeff << "*";
            os << at;
            first = false;
            continue;
        }
        if (coeff < 0) {
            os << " - ";
            if (coeff != -1)
                os << -coeff << "*";
        } else {
            os << " + ";
            if (coeff != 1)
                os << coeff << "*";
        }
        os << at;
    }
    if (lin.k > 0)
        os << " + " << lin.k;
    else if (lin.k < 0)
        os << " - " << -lin.k;
    return os.str();
}

std::string renderFormula(const SrcFormula& f) {
    switch (f.kind) {
    case SrcFormula::Kind::True: return "\\true";
    case SrcFormula::Kind::False: return "\\false";
    case SrcFormula::Kind::Cmp:
        return renderLin(f.lhs) + " " + relText(f.rel) + " " + renderLin(f.rhs);
    case SrcFormula::Kind::Chain:
        return renderLin(f.lhs) + " <= " + renderLin(f.chainMid) + " <= " + renderLin(f.rhs);
    case SrcFormula::Kind::And: {
        std::string out;
        for (size_t i = 0; i < f.kids.size(); ++i) {
            if (i)
                out += " && ";
            const SrcFormula& k = f.kids[i];
            bool paren = needsParens(k);
            out += paren ? "(" + renderFormula(k) + ")" : renderFormula(k);
        }
        return out;
    }
    case SrcFormula::Kind::Or: {
        std::string out;
        for (size_t i = 0; i < f.kids.size(); ++i) {
            if (i)
                out += " || ";
            out += "(" + renderFormula(f.kids[i]) + ")";
        }
        return out;
    }
    case SrcFormula::Kind::Forall: {
        std::string out = "\\forall integer " + f.boundVar + "; ";
        if (f.lo && f.hi)
            out += renderLin(*f.lo) + " <= " + f.boundVar + " < " + renderLin(*f.hi) + " ==> ";
        return out + renderFormula(f.kids[0]);
    }
    case SrcFormula::Kind::Exists: {
        std::string out = "\\exists integer " + f.boundVar + "; ";
        if (f.lo && f.hi)
            out += renderLin(*f.lo) + " <= " + f.boundVar + " < " + renderLin(*f.hi) + " && ";
        return out + renderFormula(f.kids[0]);
    }
    }
    return "\\true";
}

std::string renderAssigns(const std::vector<AssignsRange>& ranges) {
    if (ranges.empty())
        return "\\nothing";
    std::string out;
    for (size_t i = 0; i < ranges.size(); ++i) {
        if (i)
            out += ", ";
        SrcLin hiIncl = ranges[i].endExcl;
        hiIncl.k -= 1;
        out += ranges[i].array + "[" + renderLin(ranges[i].start) + " .. " + renderLin(hiIncl) + "]";
    }
    return out;
}

namespace {

std::string indentOf(const std::string& line) {
    size_t n = line.find_first_not_of(" \t");
    return n == std::string::npos ? line : line.substr(0, n);
}

std::string headerBlock(const Contract& c, const std::string& indent) {
    std::ostringstream os;
    os << indent << "/*@\n";
    os << indent << "  requires " << renderFormula(c.pre) << ";\n";
    os << indent << "  assigns " << renderAssigns(c.assigns) << ";\n";
    std::string post;
    if (c.postDisjuncts.empty()) {
        post = "\\true";
    } else if (c.postDisjuncts.size() == 1) {
        post = renderFormula(c.postDisjuncts[0]);
    } else {
        for (size_t i = 0; i < c.postDisjuncts.size(); ++i) {
            if (i)
                post += " || ";
            post += "(" + renderFormula(c.postDisjuncts[i]) + ")";
        }
    }
    os << indent << "  ensures " << post << ";\n";
    os << indent << "*/\n";
    return os.str();
}

std::string loopBlock(const LoopAnnotation& ann, const std::string& indent) {
    std::ostringstream os;
    os << indent << "/*@\n";
    // invariants first, then loop assigns
    for (const auto& item : ann.items) {
        if (item.kind == InvariantClause::Kind::LoopAssigns)
            continue;
        os << indent << "  loop invariant " << renderFormula(item.formula) << ";\n";
    }
    for (const auto& item : ann.items) {
        if (item.kind != InvariantClause::Kind::LoopAssigns)
            continue;
        os << indent << "  loop assigns ";
        bool first = true;
        for (const auto& s : item.scalars) {
            if (!first)
                os << ", ";
            os << s;
            first = false;
        }
        for (const auto& r : item.ranges) {
            if (!first)
                os << ", ";
            SrcLin hiIncl = r.endExcl;
            hiIncl.k -= 1;
            os << r.array << "[" << renderLin(r.start) << " .. " << renderLin(hiIncl) << "]";
            first = false;
        }
        if (first)
            os << "\\nothing";
        os << ";\n";
    }
    os << indent << "*/\n";
    return os.str();
}

} // namespace

AnnotatedSource annotate(const SourceFile& src, const Program& prog,
                         const std::vector<Contract>& contracts) {
    std::vector<std::string> lines;
    {
        std::istringstream in(src.text);
        std::string line;
        while (std::getline(in, line))
            lines.push_back(line);
    }
    bool trailingNewline = !src.text.empty() && src.text.back() == '\n';

    // line -> blocks to insert before it
    std::map<int, std::vector<std::pair<std::string, std::string>>> inserts; // (kind, text)
    std::vector<int> dropExisting; // header annotation lines being replaced

    for (const Contract& c : contracts) {
        const FunctionDef* fd = prog.find(c.function);
        if (!fd)
            continue;
        int headerLine = fd->loc.line;
        inserts[headerLine].emplace_back("contract", std::string());
        for (const auto& ann : c.loops)
            if (ann.loc.line > 0)
                inserts[ann.loc.line].emplace_back("loop:" + std::to_string(ann.loopId),
                                                   std::string());
        // replace an annotation block that ends right above the header
        int l = headerLine - 1; // 0-based index of the line above
        while (l - 1 >= 0 && lines[static_cast<size_t>(l - 1)].find_first_not_of(" \t") ==
                                 std::string::npos)
            --l;
        if (l - 1 >= 0) {
            const std::string& above = lines[static_cast<size_t>(l - 1)];
            size_t open = above.find("/*@");
            if (open != std::string::npos && above.find("*/") != std::string::npos &&
                indentOf(above).size() == open)
                dropExisting.push_back(l - 1);
        }
    }

    std::ostringstream out;
    AnnotatedSource result;
    for (size_t i = 0; i < lines.size(); ++i) {
        int lineNo = static_cast<int>(i) + 1;
        auto ins = inserts.find(lineNo);
        if (ins != inserts.end()) {
            std::string indent = indentOf(lines[i]);
            for (const auto& [kind, unused] : ins->second) {
                (void)unused;
                std::string block;
                if (kind == "contract") {
                    for (const Contract& c : contracts) {
                        const FunctionDef* fd = prog.find(c.function);
                        if (fd && fd->loc.line == lineNo) {
                            block = headerBlock(c, indent);
                            break;
                        }
                    }
                } else {
                    int loopId = std::stoi(kind.substr(5));
                    for (const Contract& c : contracts)
                        for (const auto& ann : c.loops)
                            if (ann.loopId == loopId && ann.loc.line == lineNo)
                                block = loopBlock(ann, indent);
                }
                if (!block.empty()) {
                    out << block;
                    result.spans.push_back(AnnotationSpan{lineNo, kind, block});
                }
            }
        }
        if (std::find(dropExisting.begin(), dropExisting.end(), static_cast<int>(i)) !=
            dropExisting.end())
            continue;
        out << lines[i];
        if (i + 1 < lines.size() || trailingNewline)
            out << "\n";
    }
    result.text = out.str();
    return result;
}

std::string stripAnnotations(const std::string& text) {
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "/*@") == 0) {
            size_t end = text.find("*/", i + 3);
            if (end == std::string::npos)
                break;
            // erase back through the line's leading whitespace
            size_t lineStart = out.find_last_of('\n');
            size_t from = lineStart == std::string::npos ? 0 : lineStart + 1;
            bool onlyWs = out.find_first_not_of(" \t", from) == std::string::npos;
            if (onlyWs)
                out.erase(from);
            i = end + 2;
            // swallow the trailing newline of a block that owned its line
            if (onlyWs && i < text.size() && text[i] == '\n')
                ++i;
            continue;
        }
        out.push_back(text[i++]);
    }
    return out;
}

} // namespace arcs
