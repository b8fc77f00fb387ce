#include "scs/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "scs/json_io.hpp"

namespace scs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::function<void(std::string_view)>& fault_hook() {
    static std::function<void(std::string_view)> hook;
    return hook;
}

void stage(std::string_view name) {
    if (auto& hook = fault_hook()) hook(name);
}

[[noreturn]] void io_error(const fs::path& path, const std::string& what) {
    throw Error("IoError", path.string() + ": " + what + ": " + std::strerror(errno), path.string());
}

void write_all(int fd, const fs::path& path, std::string_view data) {
    while (!data.empty()) {
        auto n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            io_error(path, "write failed");
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

bool unparseable(const std::string& code) {
    return code == "IoError" || code == "JsonSyntax" || code == "ParseError" ||
           code == "InvalidDocument";
}

std::vector<fs::path> json_files(const fs::path& dir) {
    std::vector<fs::path> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto& p = entry.path();
        if (!entry.is_regular_file() || p.extension() != ".json") continue;
        if (p.filename().string().starts_with(".")) continue;  // temp files of atomic_write
        out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Collects every violation while building as much of the snapshot as the
// files allow.
struct Loader {
    const fs::path& root;
    WorkspaceSnapshot snap;
    std::vector<CheckEntry> entries;
    bool ontology_ok = false;

    std::string rel(const fs::path& p) const { return fs::relative(p, root).generic_string(); }

    void add(const fs::path& file, std::string location, std::string code, std::string message) {
        entries.push_back({rel(file), std::move(location), std::move(code), std::move(message)});
    }

    void add(const fs::path& file, const Error& e) { add(file, e.subject(), e.code(), e.what()); }

    void add(const fs::path& file, const Report& report, const std::string& prefix = {}) {
        for (const auto& issue : report)
            add(file, prefix.empty() ? issue.subject : prefix + "/" + issue.subject, issue.code,
                issue.message);
    }

    template <class F>
    bool guarded(const fs::path& file, F&& f) {
        try {
            f();
            return true;
        } catch (const Error& e) {
            add(file, e);
        } catch (const std::exception& e) {
            add(file, "", "InvalidDocument", e.what());
        }
        return false;
    }

    void run() {
        auto ont_path = root / "ontology.json";
        ontology_ok = guarded(ont_path, [&] {
            snap.ontology = json_io::ontology_from_json(read_json(ont_path));
        });

        std::set<std::string> model_ids;
        for (const auto& p : json_files(root / "models")) {
            guarded(p, [&] {
                auto m = json_io::model_from_json(read_json(p));
                if (!model_ids.insert(m.id).second)
                    throw Error("DuplicateId", "model id '" + m.id + "' declared twice", m.id);
                if (ontology_ok) add(p, validate_model(snap.ontology, m), m.id);
                snap.models.push_back(std::move(m));
            });
        }

        auto corpus_path = root / "corpus.json";
        bool corpus_ok = guarded(corpus_path, [&] {
            snap.corpus = json_io::corpus_from_json(read_json(corpus_path), snap.models);
        });
        if (corpus_ok && ontology_ok) {
            Report report = audit_corpus(snap.ontology, snap.corpus);
            // Model problems are reported against their own files already.
            std::erase_if(report, [&](const Issue& i) {
                return model_ids.contains(i.subject) && i.code != "DuplicateId";
            });
            add(corpus_path, report);
        }

        for (const auto& p : json_files(root / "scenarios")) {
            guarded(p, [&] {
                auto s = json_io::scenario_from_json(read_json(p));
                if (snap.scenarios.contains(s.id))
                    throw Error("DuplicateId", "scenario id '" + s.id + "' declared twice", s.id);
                add(p, ontology_ok ? validate_scenario(snap.ontology, s) : validate_scenario(s),
                    s.id);
                snap.scenarios.emplace(s.id, std::move(s));
            });
        }

        auto defs_path = root / "definitions.json";
        if (fs::exists(defs_path)) {
            guarded(defs_path, [&] {
                snap.definitions = json_io::definitions_from_json(read_json(defs_path));
            });
            if (ontology_ok)
                for (const auto& d : snap.definitions)
                    guarded(defs_path, [&] { check_definition(snap.ontology, d); });
        }
    }
};

}  // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_error(path, "cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) io_error(path, "read failed");
    return buf.str();
}

json read_json(const fs::path& path) {
    auto text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("JsonSyntax", path.string() + ": " + e.what(), path.string());
    }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void set_write_fault_hook(std::function<void(std::string_view stage)> hook) {
    fault_hook() = std::move(hook);
}

void atomic_write(const fs::path& path, std::string_view content) {
    auto dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::error_code ec;
    fs::create_directories(dir, ec);
    auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));

    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) io_error(tmp, "cannot create");
    try {
        stage("temp_opened");
        auto half = content.size() / 2;
        write_all(fd, tmp, content.substr(0, half));
        stage("half_written");
        write_all(fd, tmp, content.substr(half));
        if (::fsync(fd) != 0) io_error(tmp, "fsync failed");
        int rc = ::close(fd);
        fd = -1;
        if (rc != 0) io_error(tmp, "close failed");
        stage("before_rename");
        if (::rename(tmp.c_str(), path.c_str()) != 0) io_error(path, "rename failed");
    } catch (...) {
        if (fd >= 0) ::close(fd);
        ::unlink(tmp.c_str());
        throw;
    }
    int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (dfd >= 0) {
        ::fsync(dfd);
        ::close(dfd);
    }
    stage("renamed");
}

WorkspaceSnapshot Workspace::load() const {
    if (!fs::is_directory(root_))
        throw Error("IoError", "workspace '" + root_.string() + "' is not a directory",
                    root_.string());
    Loader loader{root_, {}, {}, false};
    loader.run();
    if (!loader.entries.empty()) {
        const auto& e = loader.entries.front();
        throw Error(e.code, e.file + (e.location.empty() ? "" : ":" + e.location) + ": " + e.message,
                    e.location);
    }
    return std::move(loader.snap);
}

void Workspace::save_corpus(const Corpus& corpus) const {
    atomic_write(corpus_path(), dump_json(json_io::to_json(corpus)));
}

fs::path Workspace::write_publication(const PublicationManifest& manifest) const {
    auto path = publication_path(manifest.scenario_id);
    atomic_write(path, dump_json(json_io::to_json(manifest)));
    return path;
}

CheckResult check_workspace(const fs::path& root) {
    CheckResult result;
    if (!fs::is_directory(root)) {
        result.exit_code = 2;
        result.entries.push_back({root.string(), "", "IoError", "workspace is not a directory"});
        return result;
    }
    Loader loader{root, {}, {}, false};
    loader.run();
    result.entries = std::move(loader.entries);
    for (const auto& e : result.entries)
        result.exit_code = std::max(result.exit_code, unparseable(e.code) ? 2 : 1);
    return result;
}

PublicationManifest publish(const Workspace& ws, const std::string& scenario_id,
                            PublicationMode mode) {
    auto snap = ws.load();
    auto it = snap.scenarios.find(scenario_id);
    if (it == snap.scenarios.end())
        throw Error("UnknownScenario", "unknown scenario '" + scenario_id + "'", scenario_id);
    auto manifest = compile_publication(snap.ontology, it->second, snap.corpus, mode);
    ws.write_publication(manifest);
    return manifest;
}

}  // namespace scs
