#include "cogsplit/manifest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cogsplit/error.hpp"

namespace cogsplit {

namespace {

using nlohmann::json;

[[noreturn]] void bad_line(size_t line_no, const std::string& why) {
    throw Error(ErrorCode::BadManifest, "line " + std::to_string(line_no) + ": " + why);
}

uint32_t parse_u32(std::string_view field, size_t line_no, const char* what) {
    uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        bad_line(line_no, std::string("invalid ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

void check_label(const std::string& label, size_t line_no, const char* what) {
    if (label.empty()) bad_line(line_no, std::string("empty ") + what + " label");
}

void parse_columnar_line(const std::string& line, size_t line_no, DatasetManifest& out) {
    std::string_view view(line);
    if (view[0] == '@' && view.rfind("@story,", 0) != 0) {
        bad_line(line_no, "unknown directive '" + line + "'");
    }
    std::vector<std::string_view> fields;
    // Locator is everything after the third comma, commas included.
    size_t start = 0;
    const size_t want = view.rfind("@story,", 0) == 0 ? 3 : 4;
    while (fields.size() + 1 < want) {
        const size_t comma = view.find(',', start);
        if (comma == std::string_view::npos) bad_line(line_no, "too few fields");
        fields.push_back(view.substr(start, comma - start));
        start = comma + 1;
    }
    fields.push_back(view.substr(start));

    if (want == 3) {
        ManifestStory story;
        story.label = std::string(fields[1]);
        check_label(story.label, line_no, "story");
        story.segment_count = parse_u32(fields[2], line_no, "segment count");
        out.stories.push_back(std::move(story));
    } else {
        ManifestRecording rec;
        rec.subject = std::string(fields[0]);
        rec.story = std::string(fields[1]);
        check_label(rec.subject, line_no, "subject");
        check_label(rec.story, line_no, "story");
        rec.position = parse_u32(fields[2], line_no, "segment position");
        rec.locator = std::string(fields[3]);
        out.recordings.push_back(std::move(rec));
    }
}

void parse_object_line(const std::string& line, size_t line_no, DatasetManifest& out) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        bad_line(line_no, std::string("invalid object: ") + e.what());
    }
    if (!obj.is_object()) bad_line(line_no, "expected an object");
    if (obj.contains("segments")) {
        ManifestStory story;
        if (!obj.contains("story") || !obj["story"].is_string() ||
            !obj["segments"].is_number_unsigned()) {
            bad_line(line_no, "story object needs string 'story' and unsigned 'segments'");
        }
        story.label = obj["story"].get<std::string>();
        check_label(story.label, line_no, "story");
        story.segment_count = obj["segments"].get<uint32_t>();
        out.stories.push_back(std::move(story));
    } else {
        ManifestRecording rec;
        if (!obj.contains("subject") || !obj.contains("story") || !obj.contains("position") ||
            !obj["subject"].is_string() || !obj["story"].is_string() ||
            !obj["position"].is_number_unsigned()) {
            bad_line(line_no, "recording object needs 'subject', 'story', 'position'");
        }
        rec.subject = obj["subject"].get<std::string>();
        rec.story = obj["story"].get<std::string>();
        check_label(rec.subject, line_no, "subject");
        check_label(rec.story, line_no, "story");
        rec.position = obj["position"].get<uint32_t>();
        if (obj.contains("locator")) {
            if (!obj["locator"].is_string()) bad_line(line_no, "'locator' must be a string");
            rec.locator = obj["locator"].get<std::string>();
        }
        out.recordings.push_back(std::move(rec));
    }
}

void check_writable_label(const std::string& label, const char* what) {
    if (label.empty() || label.find(',') != std::string::npos ||
        label.find('\n') != std::string::npos) {
        throw Error(ErrorCode::BadManifest,
                    std::string(what) + " label '" + label + "' not representable in columnar form");
    }
}

}  // namespace

DatasetManifest parse_manifest(std::istream& in) {
    DatasetManifest manifest;
    std::string line;
    size_t line_no = 0;
    bool object_form = false;
    bool sniffed = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        if (!sniffed) {
            object_form = line[0] == '{';
            sniffed = true;
        }
        if (object_form) {
            parse_object_line(line, line_no, manifest);
        } else {
            parse_columnar_line(line, line_no, manifest);
        }
    }
    return manifest;
}

DatasetManifest parse_manifest_text(const std::string& text) {
    std::istringstream in(text);
    return parse_manifest(in);
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open manifest '" + path + "'");
    return parse_manifest(in);
}

std::string write_manifest(const DatasetManifest& manifest) {
    std::ostringstream out;
    out << "# cogsplit manifest v1\n";
    for (const auto& story : manifest.stories) {
        check_writable_label(story.label, "story");
        out << "@story," << story.label << ',' << story.segment_count << '\n';
    }
    for (const auto& rec : manifest.recordings) {
        check_writable_label(rec.subject, "subject");
        check_writable_label(rec.story, "story");
        if (rec.locator.find('\n') != std::string::npos) {
            throw Error(ErrorCode::BadManifest, "locator with newline not representable");
        }
        out << rec.subject << ',' << rec.story << ',' << rec.position << ',' << rec.locator
            << '\n';
    }
    return out.str();
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write manifest '" + path + "'");
    out << write_manifest(manifest);
}

}  // namespace cogsplit
