#ifndef TWNP_CONLLU_HPP
#define TWNP_CONLLU_HPP

#include <set>
#include <string>
#include <vector>

namespace twnp {

// One syntactic word of a CoNLL-U sentence. Only ID, FORM, UPOS, HEAD and
// DEPREL are interpreted; the remaining columns ride along untouched.
struct Token {
    int id = 0;            // 1-based surface position
    std::string form;
    std::string lemma = "_";
    std::string upos = "_";
    std::string xpos = "_";
    std::string feats = "_";
    int head = 0;          // 0 = root
    std::string deprel = "_";
    std::string deps = "_";
    std::string misc = "_";
};

struct Sentence {
    std::vector<Token> tokens;
    std::vector<std::string> comments;   // "#"-prefixed lines, verbatim
    std::string treebank_id;
    // Multiword-token ranges ("1-2") and empty nodes ("5.1"), kept verbatim.
    // first = number of syntactic tokens seen before the line, so the writer
    // can put it back in exactly the same spot.
    std::vector<std::pair<int, std::string>> preserved;
};

// Validated head/label arrays. heads[i] is the head of token i+1.
struct DepTree {
    std::vector<int> heads;
    std::vector<std::string> labels;
    int size() const { return static_cast<int>(heads.size()); }
};

struct ConlluError : std::exception {
    std::string message;
    explicit ConlluError(std::string msg) : message(std::move(msg)) {}
    const char* what() const noexcept override { return message.c_str(); }
};

// Parses a whole CoNLL-U document. treebank_id is attached to every sentence
// unless a "# treebank_id = ..." comment overrides it.
std::vector<Sentence> read_conllu(const std::string& text,
                                  const std::string& treebank_id = "");
std::vector<Sentence> read_conllu_file(const std::string& path,
                                       const std::string& treebank_id = "");

std::string write_conllu(const std::vector<Sentence>& sentences);
void write_conllu_file(const std::string& path,
                       const std::vector<Sentence>& sentences);

// Checks the single-root / acyclicity invariants and extracts the tree.
DepTree validate_tree(const Sentence& sentence);

// True iff heads (1-based tokens, 0 = root) form a tree: exactly one token
// attached to 0 and every token reaches 0.
bool is_valid_tree(const std::vector<int>& heads);

// Dependents d whose arc (head[d], d) spans a word that is not a descendant
// of the head.
std::set<int> nonprojective_arcs(const DepTree& tree);

inline bool is_projective(const DepTree& tree) {
    return nonprojective_arcs(tree).empty();
}

// Replaces heads/labels of the sentence tokens in place.
void apply_tree(Sentence& sentence, const DepTree& tree);

std::string path_stem(const std::string& path);

}  // namespace twnp

#endif
