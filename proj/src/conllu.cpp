#include "twnp/conllu.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace twnp {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool is_range_or_empty_node_id(const std::string& s) {
    auto sep = s.find_first_of("-.");
    if (sep == std::string::npos || sep == 0 || sep + 1 >= s.size()) return false;
    return all_digits(s.substr(0, sep)) && all_digits(s.substr(sep + 1));
}

int parse_int_field(const std::string& s, const char* what, int line_no) {
    if (!all_digits(s))
        throw ConlluError("line " + std::to_string(line_no) + ": non-integer " +
                          what + " '" + s + "'");
    return std::stoi(s);
}

void flush_sentence(std::vector<Sentence>& out, Sentence& cur,
                    const std::string& treebank_id) {
    if (cur.tokens.empty() && cur.comments.empty() && cur.preserved.empty()) return;
    if (cur.tokens.empty())
        throw ConlluError("sentence block with no token lines");
    if (cur.treebank_id.empty()) cur.treebank_id = treebank_id;
    out.push_back(std::move(cur));
    cur = Sentence();
}

const std::string kTreebankIdComment = "# treebank_id = ";

}  // namespace

std::vector<Sentence> read_conllu(const std::string& text,
                                  const std::string& treebank_id) {
    std::vector<Sentence> sentences;
    Sentence cur;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush_sentence(sentences, cur, treebank_id);
            continue;
        }
        if (line[0] == '#') {
            cur.comments.push_back(line);
            if (line.rfind(kTreebankIdComment, 0) == 0)
                cur.treebank_id = line.substr(kTreebankIdComment.size());
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() != 10)
            throw ConlluError("line " + std::to_string(line_no) + ": expected 10 columns, got " +
                              std::to_string(fields.size()));
        if (is_range_or_empty_node_id(fields[0])) {
            cur.preserved.emplace_back(static_cast<int>(cur.tokens.size()), line);
            continue;
        }
        Token tok;
        tok.id = parse_int_field(fields[0], "id", line_no);
        if (tok.id != static_cast<int>(cur.tokens.size()) + 1)
            throw ConlluError("line " + std::to_string(line_no) + ": id sequence gap, expected " +
                              std::to_string(cur.tokens.size() + 1) + " got " + fields[0]);
        tok.form = fields[1];
        tok.lemma = fields[2];
        tok.upos = fields[3];
        tok.xpos = fields[4];
        tok.feats = fields[5];
        tok.head = parse_int_field(fields[6], "head", line_no);
        tok.deprel = fields[7];
        tok.deps = fields[8];
        tok.misc = fields[9];
        if (tok.head == tok.id)
            throw ConlluError("line " + std::to_string(line_no) + ": token is its own head");
        cur.tokens.push_back(std::move(tok));
    }
    flush_sentence(sentences, cur, treebank_id);
    return sentences;
}

std::vector<Sentence> read_conllu_file(const std::string& path,
                                       const std::string& treebank_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConlluError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string id = treebank_id.empty() ? path_stem(path) : treebank_id;
    return read_conllu(buf.str(), id);
}

std::string write_conllu(const std::vector<Sentence>& sentences) {
    std::ostringstream out;
    for (const auto& sent : sentences) {
        for (const auto& c : sent.comments) out << c << '\n';
        std::size_t pres = 0;
        for (std::size_t i = 0; i <= sent.tokens.size(); ++i) {
            while (pres < sent.preserved.size() &&
                   sent.preserved[pres].first == static_cast<int>(i)) {
                out << sent.preserved[pres].second << '\n';
                ++pres;
            }
            if (i == sent.tokens.size()) break;
            const Token& t = sent.tokens[i];
            out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
                << t.xpos << '\t' << t.feats << '\t' << t.head << '\t' << t.deprel << '\t'
                << t.deps << '\t' << t.misc << '\n';
        }
        out << '\n';
    }
    return out.str();
}

void write_conllu_file(const std::string& path, const std::vector<Sentence>& sentences) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConlluError("cannot write " + path);
    out << write_conllu(sentences);
}

bool is_valid_tree(const std::vector<int>& heads) {
    const int n = static_cast<int>(heads.size());
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        if (heads[i] < 0 || heads[i] > n || heads[i] == i + 1) return false;
        if (heads[i] == 0) ++roots;
    }
    if (roots != 1) return false;
    for (int i = 0; i < n; ++i) {
        int node = i + 1, steps = 0;
        while (node != 0) {
            node = heads[node - 1];
            if (++steps > n) return false;  // cycle
        }
    }
    return true;
}

DepTree validate_tree(const Sentence& sentence) {
    DepTree tree;
    const int n = static_cast<int>(sentence.tokens.size());
    tree.heads.reserve(n);
    tree.labels.reserve(n);
    std::vector<int> roots;
    for (const auto& t : sentence.tokens) {
        tree.heads.push_back(t.head);
        tree.labels.push_back(t.deprel);
        if (t.head == 0) roots.push_back(t.id);
        if (t.head > n)
            throw ConlluError("token " + std::to_string(t.id) + ": head " +
                              std::to_string(t.head) + " out of range");
    }
    if (roots.empty()) throw ConlluError("no token attached to root");
    if (roots.size() > 1) {
        std::string ids;
        for (int r : roots) ids += (ids.empty() ? "" : ",") + std::to_string(r);
        throw ConlluError("multiple root-attached tokens: " + ids);
    }
    for (int i = 1; i <= n; ++i) {
        int node = i, steps = 0;
        while (node != 0) {
            node = tree.heads[node - 1];
            if (++steps > n) {
                // report the cycle members starting from i
                std::string ids;
                int v = i;
                for (int k = 0; k <= n; ++k) {
                    ids += (ids.empty() ? "" : ",") + std::to_string(v);
                    v = tree.heads[v - 1];
                    if (v == i) break;
                }
                throw ConlluError("cycle involving tokens " + ids);
            }
        }
    }
    return tree;
}

std::set<int> nonprojective_arcs(const DepTree& tree) {
    std::set<int> result;
    const int n = tree.size();
    for (int d = 1; d <= n; ++d) {
        const int h = tree.heads[d - 1];
        if (h == 0) continue;  // everything descends from the root
        const int lo = std::min(h, d), hi = std::max(h, d);
        for (int w = lo + 1; w < hi; ++w) {
            // climb from w; projective iff h appears on the path to 0
            int node = w;
            bool descends = false;
            while (node != 0) {
                node = tree.heads[node - 1];
                if (node == h) { descends = true; break; }
            }
            if (!descends) {
                result.insert(d);
                break;
            }
        }
    }
    return result;
}

void apply_tree(Sentence& sentence, const DepTree& tree) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
        sentence.tokens[i].head = tree.heads[i];
        sentence.tokens[i].deprel = tree.labels[i];
    }
}

std::string path_stem(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

}  // namespace twnp
