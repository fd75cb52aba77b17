#include "osagent/backend.hpp"

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

ScriptedMockBackend ScriptedMockBackend::from_file(const std::string& path) {
    return from_text(read_file(path), path);
}

ScriptedMockBackend ScriptedMockBackend::from_text(const std::string& text,
                                                   const std::string& origin) {
    ScriptedMockBackend b;
    b.origin_ = origin;

    std::vector<std::string> lines = split_lines(text);
    size_t i = 0;
    bool saw_header = false;
    Entry* open = nullptr;

    for (; i < lines.size(); i++) {
        const std::string& raw = lines[i];
        std::string line = trim(raw);

        if (!saw_header) {
            if (line.empty() || line[0] == '#') continue;
            if (line != "mockplan/1")
                throw SchemaError(origin + ": expected header 'mockplan/1'");
            saw_header = true;
            continue;
        }

        if (!open && starts_with(line, "!inject ")) {
            std::vector<std::string> parts = split(collapse_ws(line.substr(8)), ' ');
            if (parts.size() != 2) throw SchemaError(origin + ": bad !inject line: " + line);
            int n = 0;
            try {
                n = std::stoi(parts[1]);
            } catch (const std::exception&) {
                throw SchemaError(origin + ": bad !inject count: " + line);
            }
            if (parts[0] == "verify_flaky_fail") b.faults_.verify_flaky_fails = n;
            else if (parts[0] == "crash_on_action") b.faults_.crash_on_action = n;
            else if (parts[0] == "backend_drop") b.faults_.backend_drop_turn = n;
            else throw SchemaError(origin + ": unknown fault '" + parts[0] + "'");
            continue;
        }

        if (starts_with(line, "== ")) {
            Entry e;
            std::string sel = trim(line.substr(3));
            if (starts_with(sel, "turn ")) {
                e.kind = Entry::Turn;
                e.turn = std::stoi(trim(sel.substr(5)));
            } else if (starts_with(sel, "when ")) {
                e.kind = Entry::When;
                std::string q = trim(sel.substr(5));
                if (q.size() < 2 || q.front() != '"' || q.back() != '"')
                    throw SchemaError(origin + ": when needs a quoted string: " + line);
                e.needle = q.substr(1, q.size() - 2);
            } else if (sel == "any") {
                e.kind = Entry::Any;
            } else if (sel == "loop") {
                e.kind = Entry::Loop;
            } else {
                throw SchemaError(origin + ": unknown selector: " + line);
            }
            b.entries_.push_back(std::move(e));
            open = &b.entries_.back();
            continue;
        }

        if (open) {
            open->body += raw;
            open->body += "\n";
        } else if (!line.empty() && line[0] != '#') {
            throw SchemaError(origin + ": text outside any '== ' entry: " + line);
        }
    }

    if (!saw_header) throw SchemaError(origin + ": missing 'mockplan/1' header");
    if (b.entries_.empty()) throw SchemaError(origin + ": no response entries");
    return b;
}

std::map<std::string, int> parse_semantic_labels(const std::string& user_text) {
    std::map<std::string, int> out;
    for (const std::string& line : split_lines(user_text)) {
        std::string t = trim(line);
        if (!starts_with(t, "(ID: ")) continue;
        size_t comma = t.find(',', 5);
        if (comma == std::string::npos) continue;
        int id = 0;
        try {
            id = std::stoi(t.substr(5, comma - 5));
        } catch (const std::exception&) {
            continue;
        }
        size_t lab = t.find("Label: ", comma);
        if (lab == std::string::npos) continue;
        size_t end = t.find(", X1: ", lab);
        if (end == std::string::npos) continue;
        std::string label = t.substr(lab + 7, end - lab - 7);
        out.emplace(label, id); // first occurrence wins
    }
    return out;
}

std::string substitute_mark_ids(const std::string& body, const std::string& user_text,
                                const std::string& origin) {
    if (body.find("{{id:") == std::string::npos) return body;
    std::map<std::string, int> labels = parse_semantic_labels(user_text);
    std::string out;
    size_t pos = 0;
    while (pos < body.size()) {
        size_t open = body.find("{{id:", pos);
        if (open == std::string::npos) {
            out += body.substr(pos);
            break;
        }
        size_t close = body.find("}}", open);
        if (close == std::string::npos)
            throw BackendUnavailableError(origin + ": unterminated {{id:...}} placeholder");
        out += body.substr(pos, open - pos);
        std::string label = body.substr(open + 5, close - open - 5);
        auto it = labels.find(label);
        if (it == labels.end())
            throw BackendUnavailableError(origin + ": no element labeled \"" + label +
                                          "\" on the current screen");
        out += std::to_string(it->second);
        pos = close + 2;
    }
    return out;
}

std::string ScriptedMockBackend::generate(const ModelRequest& req) {
    turn_++;
    if (faults_.backend_drop_turn > 0 && turn_ == faults_.backend_drop_turn)
        throw BackendUnavailableError(origin_ + ": backend dropped on turn " +
                                      std::to_string(turn_) + " (injected fault)");

    for (Entry& e : entries_) {
        bool match = false;
        switch (e.kind) {
            case Entry::Turn: match = !e.consumed && e.turn == turn_; break;
            case Entry::When: match = !e.consumed && contains(req.user_text, e.needle); break;
            case Entry::Any: match = !e.consumed; break;
            case Entry::Loop: match = true; break;
        }
        if (!match) continue;
        if (e.kind != Entry::Loop) e.consumed = true;
        return substitute_mark_ids(e.body, req.user_text, origin_);
    }
    throw BackendUnavailableError(origin_ + ": scenario exhausted at turn " +
                                  std::to_string(turn_));
}

} // namespace osagent
