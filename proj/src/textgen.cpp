#include "bprobe/textgen.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "bprobe/error.hpp"

#include "json.hpp"

namespace bprobe::text {

const std::vector<std::string>& stop_words() {
    static const std::vector<std::string> kStopWords = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",   "been",
        "but",  "by",   "for",  "from", "had",  "has",  "have", "he",
        "her",  "his",  "i",    "in",   "is",   "it",   "its",  "my",
        "of",   "on",   "or",   "our",  "she",  "so",   "some", "that",
        "the",  "their", "them", "there", "they", "this", "to",  "was",
        "we",   "were", "what", "when", "where", "which", "who", "will",
        "with", "you",  "your"};
    return kStopWords;
}

CorpusStats corpus_stats(const std::vector<PostDraft>& posts) {
    if (posts.empty())
        throw Error(ErrorCode::EmptyCorpus, "corpus is empty");

    CorpusStats stats;
    stats.corpus_size = posts.size();

    std::int64_t total_words = 0;
    std::map<PostCategory, std::map<std::string, int>> freq;

    const auto& stops = stop_words();
    for (const PostDraft& post : posts) {
        total_words += word_count(post.description);
        for (const std::string& w :
             tokenize_words(first_sentence(post.description))) {
            if (std::find(stops.begin(), stops.end(), w) != stops.end())
                continue;
            freq[post.category][w] += 1;
        }
    }

    // Average rounded half-up.
    stats.avg_sentence_len = static_cast<int>(
        (2 * total_words + static_cast<std::int64_t>(posts.size())) /
        (2 * static_cast<std::int64_t>(posts.size())));

    for (const auto& [category, words] : freq) {
        std::vector<std::pair<std::string, int>> ranked(words.begin(),
                                                        words.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first; // ties: lexicographic
        });
        std::vector<std::string> top;
        for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
            top.push_back(ranked[i].first);
        stats.top_keywords[category] = top;
    }
    return stats;
}

std::vector<PostDraft> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::vector<PostDraft> posts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        PostDraft p;
        p.category = post_category_from_name(j.at("category").get<std::string>());
        p.title = j.at("title").get<std::string>();
        p.description = j.at("description").get<std::string>();
        posts.push_back(std::move(p));
    }
    return posts;
}

PostDraft rsg_generate(const std::vector<std::string>& wordlist,
                       PostCategory category, int len, Rng& rng) {
    if (wordlist.empty())
        throw Error(ErrorCode::ConfigSemantic, "wordlist is empty");
    if (len < 1)
        throw Error(ErrorCode::ConfigSemantic, "post length must be >= 1");

    std::vector<std::string> words;
    words.reserve(len);
    for (int i = 0; i < len; ++i)
        words.push_back(wordlist[rng.below(wordlist.size())]);

    PostDraft p;
    p.category = category;
    std::ostringstream desc;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) desc << " ";
        desc << words[i];
    }
    desc << ".";
    p.description = desc.str();

    std::ostringstream title;
    for (std::size_t i = 0; i < words.size() && i < 3; ++i) {
        if (i) title << " ";
        title << words[i];
    }
    p.title = title.str();
    return p;
}

std::vector<std::string> load_wordlist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (!line.empty() && line[0] != '#') words.push_back(line);
    }
    return words;
}

namespace {

// Sentence templates per category. {0}/{1}/{2} take the category keywords;
// the closing sentences pad toward the corpus average length.
struct TemplateSet {
    std::vector<std::string> bodies;
};

const std::map<PostCategory, TemplateSet>& template_sets() {
    static const std::map<PostCategory, TemplateSet> kSets = {
        {PostCategory::Crime,
         {{
             "Someone has {0} several {1} from our front {2} this week. Please "
             "check your own cameras and report anything unusual you notice "
             "around the block tonight.",
             "Two {1} were {0} right off the {2} before noon. Neighbors nearby "
             "should keep an eye out and let everyone here know about any "
             "suspicious person walking past.",
         }}},
        {PostCategory::Safety,
         {{
             "A small {0} started near the back {2} and thick {1} was visible "
             "from the street. Crews handled it quickly but stay alert and "
             "check on elderly neighbors today.",
             "The {2} kept sounding while {1} drifted over the yard from the "
             "{0} next door. Keep windows closed and watch the children until "
             "the air clears this evening.",
         }}},
        {PostCategory::LostPet,
         {{
             "Our {0} went {1} last night and his {2} is still hanging on the "
             "gate. He answers to Rex and is friendly, please message me if "
             "you spot him anywhere nearby.",
             "A brown {0} with a red {2} has been {1} since Sunday around the "
             "park. She is shy but gentle, call the number on the tag if she "
             "wanders into your yard.",
         }}},
        {PostCategory::UnexpectedActivity,
         {{
             "A {0} was pacing around the {1} and staring into our {2} for "
             "several minutes after dark. Nothing was taken but it felt wrong, "
             "so please review your own footage tonight.",
             "The {2} caught a {0} crossing the {1} twice around midnight "
             "carrying a long bag. If anyone recognizes the coat or the walk "
             "please say something in the comments.",
         }}},
    };
    return kSets;
}

const std::map<PostCategory, std::string>& short_templates() {
    static const std::map<PostCategory, std::string> kShort = {
        {PostCategory::Crime, "Just had {1} {0} from the {2} here."},
        {PostCategory::Safety, "Small {0} with {1} near the {2} now."},
        {PostCategory::LostPet, "Our {0} has been {1} all day, {2} attached."},
        {PostCategory::UnexpectedActivity,
         "A {0} keeps circling the {1} past our {2}."},
    };
    return kShort;
}

std::string fill_slots(std::string text,
                       const std::vector<std::string>& keywords) {
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        std::string slot = "{" + std::to_string(i) + "}";
        std::size_t pos;
        while ((pos = text.find(slot)) != std::string::npos)
            text.replace(pos, slot.size(), keywords[i]);
    }
    return text;
}

std::string keywords_title(const std::vector<std::string>& keywords) {
    std::ostringstream title;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        if (i) title << " ";
        title << keywords[i];
    }
    return title.str();
}

const std::vector<std::string>& lookup_keywords(PostCategory category,
                                                const CorpusStats& stats) {
    auto it = stats.top_keywords.find(category);
    if (it == stats.top_keywords.end() || it->second.size() < 3)
        throw Error(ErrorCode::UnknownCategory,
                    std::string("no keywords for category ") +
                        post_category_name(category));
    return it->second;
}

} // namespace

PostDraft template_generate(PostCategory category, const CorpusStats& stats,
                            Rng& rng) {
    const std::vector<std::string>& keywords = lookup_keywords(category, stats);
    const TemplateSet& set = template_sets().at(category);
    const std::string& body = set.bodies[rng.below(set.bodies.size())];

    PostDraft p;
    p.category = category;
    p.title = keywords_title(keywords);
    p.description = fill_slots(body, keywords);

    int words = word_count(p.description);
    int lo = stats.avg_sentence_len * 4 / 5;
    int hi = stats.avg_sentence_len * 6 / 5;
    // Pad with a neutral closing clause when the corpus average runs long.
    while (words < lo) {
        p.description += " Please share this with anyone living close by.";
        words = word_count(p.description);
    }
    if (words > hi)
        throw Error(ErrorCode::ConfigSemantic,
                    "template output exceeds the corpus length envelope");
    return p;
}

PostDraft template_generate_short(PostCategory category,
                                  const CorpusStats& stats, Rng&) {
    const std::vector<std::string>& keywords = lookup_keywords(category, stats);
    PostDraft p;
    p.category = category;
    p.title = keywords_title(keywords);
    p.description = fill_slots(short_templates().at(category), keywords);
    return p;
}

} // namespace bprobe::text
