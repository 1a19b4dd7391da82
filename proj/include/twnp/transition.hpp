#ifndef TWNP_TRANSITION_HPP
#define TWNP_TRANSITION_HPP

#include <array>
#include <map>

#include "twnp/encoder.hpp"

namespace twnp {

enum class TransitionKind { Shift, Swap, LeftArc, RightArc };

struct Transition {
    TransitionKind kind;
    int label = -1;  // index into the label vocabulary, arc transitions only

    bool operator==(const Transition& o) const {
        return kind == o.kind && label == o.label;
    }
};

// Arc-hybrid parser state. The buffer ends with the ROOT sentinel (index 0),
// which stays put until the configuration is terminal.
struct Configuration {
    std::vector<int> stack;   // top = back()
    std::vector<int> buffer;  // front = [0]
    struct Arc {
        int head, label, dep;
    };
    std::vector<Arc> arcs;
    std::vector<int> head_of;        // size n+1, -1 = unattached
    std::vector<int> label_of;       // parallel to head_of
    std::vector<int> leftmost_dep;   // per node, -1 = none
    std::vector<int> rightmost_dep;

    static Configuration initial(int n);
    int size() const { return static_cast<int>(head_of.size()) - 1; }
    bool terminal() const { return stack.empty() && buffer.size() == 1; }
    int buffer_front() const { return buffer.front(); }
    int stack_item(int depth) const {  // depth 1 = top; -1 if absent
        const int k = static_cast<int>(stack.size()) - depth;
        return k >= 0 ? stack[k] : -1;
    }
};

bool legal(const Configuration& c, TransitionKind kind);
std::vector<TransitionKind> legal_kinds(const Configuration& c);
Configuration apply(const Configuration& c, const Transition& t);

// 12 slot positions: for each of {s1, s2, s3, b1}: self, leftmost dependent,
// rightmost dependent. -1 marks an absent slot (the PAD vector).
std::array<int, 12> feature_slots(const Configuration& c);

// In-order traversal rank per token (1-based array of ranks, tokens 1..N).
// Projective trees map to the identity.
std::vector<int> projective_order(const DepTree& tree);

// Eager-Swap canonical sequence; applying it from the initial configuration
// reconstructs the tree exactly.
std::vector<Transition> static_oracle(const DepTree& tree, const Vocab& labels);

// Cost per legal transition kind. Closed-form arc-hybrid reachability costs
// for projective gold trees; for non-projective trees the static-oracle
// choice is zero-cost and every other legal kind costs 1. At least one legal
// kind always has cost 0.
std::map<TransitionKind, int> dynamic_costs(const Configuration& c, const DepTree& tree);

// The static-oracle decision rule evaluated at an arbitrary configuration.
Transition static_rule_choice(const Configuration& c, const DepTree& tree,
                              const Vocab& labels);

struct TransitionScorer {
    MlpParams net;  // 12 * enc_out -> 2 + 2 * n_labels
    int n_labels = 0;

    static TransitionScorer create(ParamStore& store, const ModelConfig& cfg,
                                   int n_labels);
};

// Score layout: [Shift, Swap, LeftArc x labels, RightArc x labels].
int transition_index(const Transition& t, int n_labels);
Transition transition_from_index(int idx, int n_labels);

Expr score_transitions(Graph& g, const Configuration& c,
                       const EncodedSentence& encoded, const TransitionScorer& scorer);

// Raw scores with illegal entries at -inf.
std::vector<double> masked_transition_scores(const Eigen::VectorXd& raw,
                                             const Configuration& c, int n_labels);
int argmax_index(const std::vector<double>& scores);

// Greedy decoding; repairs multiple root attachments by keeping the first
// root-attached token and hanging the others off it.
DepTree greedy_decode(Graph& g, const EncodedSentence& encoded,
                      const TransitionScorer& scorer, const Vocab& labels, int n,
                      int* steps_taken = nullptr);

DepTree tree_from_configuration(const Configuration& c, const Vocab& labels);

}  // namespace twnp

#endif
