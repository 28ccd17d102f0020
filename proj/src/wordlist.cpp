#include "lexichron/wordlist.hpp"

#include "lexichron/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace lexichron {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

} // namespace

WordForm WordForm::from_raw(std::string raw, std::optional<std::string> cognate_class) {
    WordForm form;
    form.normalized = normalize_form(raw);
    form.raw = std::move(raw);
    form.cognate_class = std::move(cognate_class);
    return form;
}

std::optional<std::size_t> LexicalDatabase::find_language(const std::string& label) const {
    for (std::size_t i = 0; i < languages_.size(); ++i)
        if (languages_[i].label == label)
            return i;
    return std::nullopt;
}

std::optional<std::size_t> LexicalDatabase::find_item(const std::string& item_id) const {
    for (std::size_t i = 0; i < items_.size(); ++i)
        if (items_[i].item_id == item_id)
            return i;
    return std::nullopt;
}

std::size_t LexicalDatabase::add_language(LanguageRecord record) {
    if (record.label.empty())
        raise(ErrKind::ConfigError, "language label must be non-empty");
    if (find_language(record.label))
        raise(ErrKind::ConfigError, "duplicate language label '" + record.label + "'");
    languages_.push_back(std::move(record));
    slots_.emplace_back(items_.size());
    return languages_.size() - 1;
}

std::size_t LexicalDatabase::add_item(ItemRecord record) {
    if (record.item_id.empty())
        raise(ErrKind::ConfigError, "item_id must be non-empty");
    if (find_item(record.item_id))
        raise(ErrKind::ConfigError, "duplicate item_id '" + record.item_id + "'");
    items_.push_back(std::move(record));
    for (auto& row : slots_)
        row.emplace_back();
    return items_.size() - 1;
}

bool LexicalDatabase::add_form(std::size_t language, std::size_t item, WordForm form) {
    if (language >= languages_.size() || item >= items_.size())
        raise(ErrKind::ConfigError, "slot key out of range");
    if (form.normalized.empty())
        raise(ErrKind::InvalidForm, "word form normalizes to nothing");
    auto& slot = slots_[language][item];
    for (const auto& existing : slot)
        if (existing.normalized == form.normalized)
            return false;
    slot.push_back(std::move(form));
    return true;
}

const std::vector<WordForm>& LexicalDatabase::slot(std::size_t language,
                                                   std::size_t item) const {
    if (language >= languages_.size() || item >= items_.size())
        raise(ErrKind::ConfigError, "slot key out of range");
    return slots_[language][item];
}

std::optional<std::size_t> LexicalDatabase::proto_language() const {
    std::optional<std::size_t> proto;
    for (std::size_t i = 0; i < languages_.size(); ++i) {
        if (languages_[i].role != LanguageRole::Proto)
            continue;
        if (proto)
            raise(ErrKind::ConfigError,
                  "more than one proto language: '" + languages_[*proto].label +
                      "' and '" + languages_[i].label + "'");
        proto = i;
    }
    return proto;
}

std::vector<std::size_t> LexicalDatabase::modern_languages() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < languages_.size(); ++i)
        if (languages_[i].role == LanguageRole::Modern)
            out.push_back(i);
    return out;
}

LexicalDatabase parse_database(std::istream& source, WordlistFormat format,
                               std::vector<std::string>* warnings) {
    if (format != WordlistFormat::TsvLongV1)
        raise(ErrKind::ConfigError, "unsupported wordlist format");

    const auto warn = [&](const std::string& msg) {
        if (warnings)
            warnings->push_back(msg);
    };

    LexicalDatabase db;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0; // set by the header
    bool header_seen = false;

    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        decode_utf8(line, "line " + std::to_string(line_no));
        auto fields = split_tabs(line);

        if (!header_seen) {
            const std::vector<std::string> kHeader = {"language", "item_id", "gloss",
                                                      "form", "cognate_class"};
            if (fields.size() != 4 && fields.size() != 5)
                raise(ErrKind::ParseError,
                      "line " + std::to_string(line_no) +
                          ": header must have 4 or 5 tab-separated columns");
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (trim(fields[i]) != kHeader[i])
                    raise(ErrKind::ParseError,
                          "line " + std::to_string(line_no) + ": header column " +
                              std::to_string(i + 1) + " must be '" + kHeader[i] +
                              "', got '" + fields[i] + "'");
            columns = fields.size();
            header_seen = true;
            continue;
        }

        if (fields.size() != columns)
            raise(ErrKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " columns, got " +
                      std::to_string(fields.size()));

        std::string language = trim(fields[0]);
        std::string item_id = trim(fields[1]);
        std::string gloss = trim(fields[2]);
        const std::string& form = fields[3];
        std::string cognate = columns == 5 ? trim(fields[4]) : std::string();

        if (language.empty())
            raise(ErrKind::ParseError,
                  "line " + std::to_string(line_no) + ": empty language label");
        if (item_id.empty())
            raise(ErrKind::ParseError,
                  "line " + std::to_string(line_no) + ": empty item_id");
        if (is_blank(form))
            raise(ErrKind::ParseError,
                  "line " + std::to_string(line_no) + ": empty form field");

        std::size_t lang_idx = db.find_language(language).value_or(SIZE_MAX);
        if (lang_idx == SIZE_MAX)
            lang_idx = db.add_language({language, LanguageRole::Modern, {}});

        std::size_t item_idx;
        if (auto existing = db.find_item(item_id)) {
            item_idx = *existing;
            if (db.item(item_idx).gloss != gloss)
                warn("line " + std::to_string(line_no) + ": item '" + item_id +
                     "' re-declared with gloss '" + gloss + "'; keeping '" +
                     db.item(item_idx).gloss + "'");
        } else {
            item_idx = db.add_item({item_id, gloss});
        }

        WordForm wf;
        try {
            wf = WordForm::from_raw(form, cognate.empty()
                                              ? std::nullopt
                                              : std::make_optional(cognate));
        } catch (const Error& e) {
            if (e.kind() == ErrKind::InvalidForm)
                raise(ErrKind::ParseError,
                      "line " + std::to_string(line_no) + ": empty form field");
            throw;
        }
        if (!db.add_form(lang_idx, item_idx, std::move(wf)))
            warn("line " + std::to_string(line_no) + ": duplicate form for (" +
                 language + ", " + item_id + ") dropped");
    }

    if (!header_seen)
        raise(ErrKind::ParseError, "input has no header line");
    return db;
}

void apply_metadata(LexicalDatabase& db, std::istream& meta) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(meta, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            raise(ErrKind::ParseError,
                  "metadata line " + std::to_string(line_no) + ": missing '='");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));

        if (key == "family_name") {
            db.set_family_name(value);
            continue;
        }
        if (key.rfind("language.", 0) == 0) {
            size_t last_dot = key.rfind('.');
            if (last_dot == std::string::npos || last_dot <= 9)
                raise(ErrKind::ParseError, "metadata line " + std::to_string(line_no) +
                                               ": malformed key '" + key + "'");
            std::string label = key.substr(9, last_dot - 9);
            std::string attr = key.substr(last_dot + 1);
            auto lang = db.find_language(label);
            if (!lang)
                raise(ErrKind::ConfigError,
                      "metadata line " + std::to_string(line_no) +
                          ": unknown language '" + label + "'");
            if (attr == "role") {
                if (value == "proto")
                    db.language(*lang).role = LanguageRole::Proto;
                else if (value == "modern")
                    db.language(*lang).role = LanguageRole::Modern;
                else
                    raise(ErrKind::ParseError,
                          "metadata line " + std::to_string(line_no) +
                              ": role must be 'proto' or 'modern', got '" + value + "'");
            } else if (attr == "tags") {
                std::set<std::string> tags;
                std::stringstream ss(value);
                std::string tag;
                while (std::getline(ss, tag, ',')) {
                    tag = trim(tag);
                    if (!tag.empty())
                        tags.insert(tag);
                }
                db.language(*lang).tags = std::move(tags);
            } else {
                raise(ErrKind::ParseError, "metadata line " + std::to_string(line_no) +
                                               ": unknown attribute '" + attr + "'");
            }
            continue;
        }
        raise(ErrKind::ParseError, "metadata line " + std::to_string(line_no) +
                                       ": unknown key '" + key + "'");
    }
    db.proto_language(); // enforce the at-most-one-proto invariant
}

void serialize_database(const LexicalDatabase& db, std::ostream& out) {
    out << "language\titem_id\tgloss\tform\tcognate_class\n";
    for (std::size_t l = 0; l < db.language_count(); ++l) {
        for (std::size_t i = 0; i < db.item_count(); ++i) {
            for (const auto& form : db.slot(l, i)) {
                out << db.language(l).label << '\t' << db.item(i).item_id << '\t'
                    << db.item(i).gloss << '\t' << form.raw << '\t'
                    << form.cognate_class.value_or("") << '\n';
            }
        }
    }
}

void serialize_metadata(const LexicalDatabase& db, std::ostream& out) {
    out << "family_name=" << db.family_name() << '\n';
    for (const auto& lang : db.languages()) {
        if (lang.role == LanguageRole::Proto)
            out << "language." << lang.label << ".role=proto\n";
        if (!lang.tags.empty()) {
            out << "language." << lang.label << ".tags=";
            bool first = true;
            for (const auto& tag : lang.tags) {
                if (!first)
                    out << ',';
                out << tag;
                first = false;
            }
            out << '\n';
        }
    }
}

LexicalDatabase load_database(const std::string& path,
                              const std::optional<std::string>& meta_path,
                              std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrKind::IoError, "cannot open '" + path + "'");
    LexicalDatabase db = parse_database(in, WordlistFormat::TsvLongV1, warnings);
    db.set_family_name(std::filesystem::path(path).stem().string());

    std::string sidecar = meta_path.value_or(path + ".meta");
    std::ifstream meta(sidecar, std::ios::binary);
    if (meta) {
        apply_metadata(db, meta);
    } else if (meta_path) {
        raise(ErrKind::IoError, "cannot open metadata file '" + sidecar + "'");
    }
    return db;
}

std::vector<std::string> common_items(const LexicalDatabase& a,
                                      const LexicalDatabase& b) {
    std::unordered_set<std::string> in_b;
    for (const auto& item : b.items())
        in_b.insert(item.item_id);
    std::vector<std::string> out;
    for (const auto& item : a.items())
        if (in_b.count(item.item_id))
            out.push_back(item.item_id);
    return out;
}

LanguageFilter all_languages() {
    return [](const LanguageRecord&) { return true; };
}

LanguageFilter modern_only() {
    return [](const LanguageRecord& l) { return l.role == LanguageRole::Modern; };
}

LanguageFilter with_tag(std::string tag) {
    return [tag = std::move(tag)](const LanguageRecord& l) { return l.has_tag(tag); };
}

LexicalDatabase subset(const LexicalDatabase& db, const LanguageFilter& keep,
                       const std::optional<std::set<std::string>>& item_ids) {
    if (item_ids)
        for (const auto& id : *item_ids)
            if (!db.find_item(id))
                raise(ErrKind::ConfigError, "item filter references unknown item_id '" +
                                                id + "'");

    std::vector<std::size_t> lang_idx;
    for (std::size_t l = 0; l < db.language_count(); ++l)
        if (keep(db.language(l)))
            lang_idx.push_back(l);
    if (lang_idx.empty())
        raise(ErrKind::EmptySelection, "language filter selects zero languages");

    std::vector<std::size_t> item_idx;
    for (std::size_t i = 0; i < db.item_count(); ++i)
        if (!item_ids || item_ids->count(db.item(i).item_id))
            item_idx.push_back(i);

    LexicalDatabase out;
    out.set_family_name(db.family_name());
    for (std::size_t l : lang_idx)
        out.add_language(db.language(l));
    for (std::size_t i : item_idx)
        out.add_item(db.item(i));
    for (std::size_t lo = 0; lo < lang_idx.size(); ++lo)
        for (std::size_t io = 0; io < item_idx.size(); ++io)
            for (const auto& form : db.slot(lang_idx[lo], item_idx[io]))
                out.add_form(lo, io, form);
    return out;
}

} // namespace lexichron
