#include "bprobe/post.hpp"

#include <cctype>

#include "bprobe/error.hpp"

namespace bprobe {

const char* post_category_name(PostCategory c) {
    switch (c) {
        case PostCategory::Crime: return "crime";
        case PostCategory::Safety: return "safety";
        case PostCategory::LostPet: return "lost-pet";
        case PostCategory::UnexpectedActivity: return "unexpected-activity";
    }
    return "crime";
}

PostCategory post_category_from_name(const std::string& name) {
    if (name == "crime") return PostCategory::Crime;
    if (name == "safety") return PostCategory::Safety;
    if (name == "lost-pet") return PostCategory::LostPet;
    if (name == "unexpected-activity") return PostCategory::UnexpectedActivity;
    throw Error(ErrorCode::UnknownCategory, "unknown post category: " + name);
}

std::vector<std::string> tokenize_words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string first_sentence(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' || c == '?' || c == '!')
            return text.substr(0, i + 1);
    }
    return text;
}

int word_count(const std::string& text) {
    return static_cast<int>(tokenize_words(text).size());
}

} // namespace bprobe
