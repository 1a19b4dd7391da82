#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <queue>

#include "twnp/conllu.hpp"

using namespace twnp;

namespace {

Sentence sentence_from_heads(const std::vector<int>& heads) {
    Sentence s;
    for (std::size_t i = 0; i < heads.size(); ++i) {
        Token t;
        t.id = static_cast<int>(i) + 1;
        t.form = "w" + std::to_string(t.id);
        t.head = heads[i];
        t.deprel = "dep";
        s.tokens.push_back(t);
    }
    return s;
}

// Reachability check independent of validate_tree: BFS from the root over
// child lists must reach every node exactly once, with a single root child.
bool oracle_valid_tree(const std::vector<int>& heads) {
    const int n = static_cast<int>(heads.size());
    int roots = 0;
    std::vector<std::vector<int>> children(n + 1);
    for (int d = 1; d <= n; ++d) {
        const int h = heads[d - 1];
        if (h < 0 || h > n || h == d) return false;
        if (h == 0) ++roots;
        children[h].push_back(d);
    }
    if (roots != 1) return false;
    std::vector<bool> seen(n + 1, false);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = true;
    int visited = 0;
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (int c : children[v]) {
            if (seen[c]) return false;
            seen[c] = true;
            ++visited;
            frontier.push(c);
        }
    }
    return visited == n;
}

// Descendant sets built by explicit BFS, then a span membership scan.
std::set<int> oracle_nonprojective(const std::vector<int>& heads) {
    const int n = static_cast<int>(heads.size());
    std::vector<std::vector<int>> children(n + 1);
    for (int d = 1; d <= n; ++d) children[heads[d - 1]].push_back(d);
    std::set<int> result;
    for (int d = 1; d <= n; ++d) {
        const int h = heads[d - 1];
        if (h == 0) continue;
        std::vector<bool> desc(n + 1, false);
        std::queue<int> q;
        q.push(h);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int c : children[v]) {
                desc[c] = true;
                q.push(c);
            }
        }
        for (int w = std::min(h, d) + 1; w < std::max(h, d); ++w)
            if (!desc[w]) {
                result.insert(d);
                break;
            }
    }
    return result;
}

}  // namespace

TEST_CASE("minimal two-token block") {
    const std::string text =
        "1\ta\t_\tX\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\t_\tX\t_\t_\t0\troot\t_\t_\n\n";
    auto sents = read_conllu(text);
    REQUIRE(sents.size() == 1);
    CHECK(sents[0].tokens.size() == 2);
    CHECK(sents[0].tokens[0].form == "a");
    CHECK(sents[0].tokens[1].head == 0);
}

TEST_CASE("comments are preserved and re-emitted") {
    const std::string text =
        "# sent_id = x\n"
        "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n\n";
    auto sents = read_conllu(text);
    REQUIRE(sents.size() == 1);
    REQUIRE(sents[0].comments.size() == 1);
    CHECK(sents[0].comments[0] == "# sent_id = x");
    CHECK(write_conllu(sents) == text);
}

TEST_CASE("malformed head names the line") {
    const std::string text = "1\ta\t_\tX\t_\t_\tx\tdep\t_\t_\n\n";
    CHECK_THROWS_WITH_AS(read_conllu(text), doctest::Contains("line 1"), ConlluError);
}

TEST_CASE("wrong column count and id gaps are reported") {
    CHECK_THROWS_AS(read_conllu("1\ta\tb\n\n"), ConlluError);
    const std::string gap =
        "1\ta\t_\tX\t_\t_\t2\tdep\t_\t_\n"
        "3\tb\t_\tX\t_\t_\t0\troot\t_\t_\n\n";
    CHECK_THROWS_WITH_AS(read_conllu(gap), doctest::Contains("line 2"), ConlluError);
}

TEST_CASE("write of empty list is empty text") {
    CHECK(write_conllu({}).empty());
}

TEST_CASE("multiword range line sits before its covered tokens") {
    const std::string text =
        "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tde\t_\tADP\t_\t_\t3\tcase\t_\t_\n"
        "2\tel\t_\tDET\t_\t_\t3\tdet\t_\t_\n"
        "3\tmar\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "5.1\tnada\t_\t_\t_\t_\t_\t_\t_\t_\n\n";
    auto sents = read_conllu(text);
    REQUIRE(sents.size() == 1);
    CHECK(sents[0].tokens.size() == 3);
    CHECK(sents[0].preserved.size() == 2);
    CHECK(write_conllu(sents) == text);
}

TEST_CASE("round-trip is identity on parsed structure") {
    const std::string text =
        "# doc = fixture\n"
        "1\tHe\the\tPRON\t_\t_\t2\tnsubj\t_\tSpaceAfter=No\n"
        "2\truns\trun\tVERB\t_\t_\t0\troot\t_\t_\n\n"
        "1\tFast\tfast\tADV\t_\t_\t0\troot\t_\t_\n\n";
    auto once = read_conllu(text);
    auto twice = read_conllu(write_conllu(once));
    CHECK(write_conllu(once) == write_conllu(twice));
    CHECK(write_conllu(once) == text);
}

TEST_CASE("validate_tree examples") {
    auto ok = validate_tree(sentence_from_heads({2, 0}));
    CHECK(ok.heads == std::vector<int>{2, 0});
    CHECK_THROWS_WITH_AS(validate_tree(sentence_from_heads({2, 1})),
                         doctest::Contains("no token attached to root"), ConlluError);
    CHECK_THROWS_WITH_AS(validate_tree(sentence_from_heads({0, 0})),
                         doctest::Contains("multiple root"), ConlluError);
    CHECK_THROWS_WITH_AS(validate_tree(sentence_from_heads({3, 0, 1, 3})),
                         doctest::Contains("cycle"), ConlluError);
}

TEST_CASE("nonprojective arc examples") {
    DepTree chain;
    chain.heads = {2, 0};
    chain.labels = {"dep", "root"};
    CHECK(nonprojective_arcs(chain).empty());

    DepTree crossing;
    crossing.heads = {3, 4, 0, 3};
    crossing.labels = {"dep", "dep", "root", "dep"};
    CHECK(nonprojective_arcs(crossing) == std::set<int>{2});
    CHECK(oracle_nonprojective({3, 4, 0, 3}) == std::set<int>{2});

    DepTree single;
    single.heads = {0};
    single.labels = {"root"};
    CHECK(nonprojective_arcs(single).empty());
}

TEST_CASE("exhaustive agreement with oracles up to n=7") {
    for (int n = 1; n <= 7; ++n) {
        std::vector<int> heads(n, 0);
        long long total = 1;
        for (int i = 0; i < n; ++i) total *= n;  // n options per position
        long long checked_trees = 0;
        long long validity_mismatches = 0, nonproj_mismatches = 0, reject_failures = 0;
        for (long long code = 0; code < total; ++code) {
            long long rest = code;
            for (int i = 0; i < n; ++i) {
                int option = static_cast<int>(rest % n);
                rest /= n;
                // candidate heads for token i+1: 0..n without i+1
                heads[i] = option >= i + 1 ? option + 1 : option;
            }
            const bool expect_valid = oracle_valid_tree(heads);
            if (is_valid_tree(heads) != expect_valid) ++validity_mismatches;
            Sentence s = sentence_from_heads(heads);
            if (expect_valid) {
                DepTree tree = validate_tree(s);
                if (nonprojective_arcs(tree) != oracle_nonprojective(heads))
                    ++nonproj_mismatches;
                ++checked_trees;
            } else {
                bool threw = false;
                try {
                    validate_tree(s);
                } catch (const ConlluError&) {
                    threw = true;
                }
                if (!threw) ++reject_failures;
            }
        }
        CHECK(validity_mismatches == 0);
        CHECK(nonproj_mismatches == 0);
        CHECK(reject_failures == 0);
        if (n == 4) CHECK(checked_trees == 64);  // 4^3 rooted trees on 4 nodes
    }
}
