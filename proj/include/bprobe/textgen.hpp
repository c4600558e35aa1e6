#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bprobe/post.hpp"
#include "bprobe/rng.hpp"

namespace bprobe::text {

struct CorpusStats {
    int avg_sentence_len = 0; // words, rounded half-up
    std::map<PostCategory, std::vector<std::string>> top_keywords; // 3 each
    std::size_t corpus_size = 0;
};

/// Shipped stop-word list (data/stopwords.txt mirrors this).
const std::vector<std::string>& stop_words();

/// Average description length plus per-category top-3 first-sentence words
/// (lowercased, stop words removed, ties broken lexicographically).
/// Throws Error{EmptyCorpus}.
CorpusStats corpus_stats(const std::vector<PostDraft>& posts);

/// Loads a JSON-lines corpus: {"category","title","description"} per line.
std::vector<PostDraft> load_corpus_jsonl(const std::string& path);

/// len words sampled uniformly (with replacement) from the wordlist;
/// title = first three words.
PostDraft rsg_generate(const std::vector<std::string>& wordlist,
                       PostCategory category, int len, Rng& rng);

std::vector<std::string> load_wordlist(const std::string& path);

/// Deterministic keyword-template generator standing in for model-based
/// generation: title = category keywords joined, description built from
/// shipped per-category sentence templates carrying all three keywords.
/// Word count stays within +/-20% of stats.avg_sentence_len.
/// Throws Error{UnknownCategory} when stats lack the category.
PostDraft template_generate(PostCategory category, const CorpusStats& stats,
                            Rng& rng);

/// Short variant below the text-only word threshold; used for the
/// image-augmentation resubmission flow.
PostDraft template_generate_short(PostCategory category,
                                  const CorpusStats& stats, Rng& rng);

/// External post producer: one line-delimited JSON request/response pair
/// per post over the child's stdio. Malformed lines are skipped and
/// counted; ten consecutive malformed lines raise ProtocolViolation.
class GeneratorPlugin {
public:
    /// Spawns `argv` (argv[0] = program). Throws Error{SpawnFailure}.
    explicit GeneratorPlugin(std::vector<std::string> argv);
    ~GeneratorPlugin();

    GeneratorPlugin(const GeneratorPlugin&) = delete;
    GeneratorPlugin& operator=(const GeneratorPlugin&) = delete;

    PostDraft next(PostCategory category);

    int skipped_lines() const { return skipped_; }

private:
    std::string read_line();

    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    int skipped_ = 0;
};

} // namespace bprobe::text
