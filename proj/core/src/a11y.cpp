#include "osagent/a11y.hpp"

#include <algorithm>
#include <set>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

bool A11yNode::has_state(const std::string& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
}

static PixelRect parse_bounds(const std::string& field, int lineno) {
    std::vector<std::string> nums = split(field, ',');
    if (nums.size() != 4) throw A11yParseError(lineno, "bounds need 4 integers: " + field);
    PixelRect r;
    try {
        r.x1 = std::stoi(trim(nums[0]));
        r.y1 = std::stoi(trim(nums[1]));
        r.x2 = std::stoi(trim(nums[2]));
        r.y2 = std::stoi(trim(nums[3]));
    } catch (const std::exception&) {
        throw A11yParseError(lineno, "bounds not integral: " + field);
    }
    if (r.x2 < r.x1 || r.y2 < r.y1)
        throw A11yParseError(lineno, "inverted bounds: " + field);
    return r;
}

A11yNode parse_a11y(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    bool saw_header = false;
    bool saw_root = false;
    A11yNode root;
    std::vector<A11yNode*> stack; // stack[d] = last node at depth d
    std::set<std::string> seen_ids;

    for (size_t i = 0; i < lines.size(); i++) {
        int lineno = static_cast<int>(i) + 1;
        const std::string& raw = lines[i];
        std::string stripped = trim(raw);
        if (stripped.empty() || stripped[0] == '#') continue;

        if (!saw_header) {
            if (stripped != "a11y/1")
                throw A11yParseError(lineno, "expected header 'a11y/1', got: " + stripped);
            saw_header = true;
            continue;
        }

        size_t indent = 0;
        while (indent < raw.size() && raw[indent] == ' ') indent++;
        if (indent % 2 != 0) throw A11yParseError(lineno, "odd indentation");
        size_t depth = indent / 2;

        std::vector<std::string> fields = split(stripped, '|');
        for (std::string& f : fields) f = trim(f);
        if (fields.size() < 4 || fields.size() > 5)
            throw A11yParseError(lineno, "expected 4 or 5 '|' fields");

        A11yNode node;
        node.role = fields[0];
        node.name = fields[1];
        node.bounds = parse_bounds(fields[2], lineno);
        if (!fields[3].empty()) {
            for (const std::string& s : split(fields[3], ','))
                node.states.push_back(trim(s));
        }
        if (fields.size() == 5) {
            if (fields[4].size() < 2 || fields[4][0] != '@')
                throw A11yParseError(lineno, "node id must start with '@'");
            node.node_id = fields[4].substr(1);
            if (!seen_ids.insert(node.node_id).second)
                throw CycleError("node @" + node.node_id + " appears twice (line " +
                                 std::to_string(lineno) + ")");
        }
        if (node.role.empty()) throw A11yParseError(lineno, "empty role");

        if (depth == 0) {
            if (saw_root) throw A11yParseError(lineno, "multiple root nodes");
            saw_root = true;
            root = std::move(node);
            stack.assign(1, &root);
        } else {
            if (!saw_root || depth > stack.size())
                throw A11yParseError(lineno, "indentation skips a level");
            A11yNode* parent = stack[depth - 1];
            parent->children.push_back(std::move(node));
            stack.resize(depth);
            stack.push_back(&parent->children.back());
        }
    }

    if (!saw_header) throw A11yParseError(0, "missing 'a11y/1' header");
    if (!saw_root) throw A11yParseError(0, "no root node");
    return root;
}

static void serialize_node(const A11yNode& node, int depth, std::string& out) {
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += node.role + " | " + node.name + " | ";
    out += std::to_string(node.bounds.x1) + "," + std::to_string(node.bounds.y1) + "," +
           std::to_string(node.bounds.x2) + "," + std::to_string(node.bounds.y2);
    out += " | " + join(node.states, ",");
    if (!node.node_id.empty()) out += " | @" + node.node_id;
    out += "\n";
    for (const A11yNode& c : node.children) serialize_node(c, depth + 1, out);
}

std::string serialize_a11y(const A11yNode& root) {
    std::string out = "a11y/1\n";
    serialize_node(root, 0, out);
    return out;
}

} // namespace osagent
