#include "repsuff/mdp_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace repsuff {

namespace {

std::string location(int line, int col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

struct Token {
  std::string text;
  int col = 0;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct RowRecord {
  int line = 0;
  VectorXd row;
};

}  // namespace

ParseError::ParseError(int line_, int col_, const std::string& message)
    : std::runtime_error(location(line_, col_) + ": " + message), line(line_), col(col_) {}

MdpFileContents parse_mdp_file(const std::string& text) {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::map<std::string, int> state_index;
  std::map<std::string, int> action_index;
  double gamma = 0.0;
  int gamma_line = 0;
  bool states_seen = false, actions_seen = false, gamma_seen = false;

  std::map<int, std::pair<double, int>> rewards;            // state -> (value, line)
  std::map<std::pair<int, int>, RowRecord> transition_rows; // (s, a) -> row
  std::map<int, RowRecord> policy_rows;                     // s -> action row
  RowRecord start_row;
  bool start_seen = false;

  auto need_names = [&](int line, int col) {
    if (!states_seen) throw ParseError(line, col, "states must be declared first");
    if (!actions_seen) throw ParseError(line, col, "actions must be declared first");
  };
  auto resolve_state = [&](const Token& t, int line) {
    auto it = state_index.find(t.text);
    if (it == state_index.end()) {
      throw ParseError(line, t.col, "unknown state name '" + t.text + "'");
    }
    return it->second;
  };
  auto resolve_action = [&](const Token& t, int line) {
    auto it = action_index.find(t.text);
    if (it == action_index.end()) {
      throw ParseError(line, t.col, "unknown action name '" + t.text + "'");
    }
    return it->second;
  };
  auto number = [&](const Token& t, int line) {
    double v = 0.0;
    if (!parse_number(t.text, v)) {
      throw ParseError(line, t.col, "expected a number, got '" + t.text + "'");
    }
    return v;
  };
  auto probability = [&](const Token& t, int line) {
    const double v = number(t, line);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParseError(line, t.col, "probability out of [0,1]: '" + t.text + "'");
    }
    return v;
  };

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::vector<Token> tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& key = tok[0].text;

    if (key == "states:") {
      if (states_seen) throw ParseError(line_no, tok[0].col, "duplicate states section");
      if (tok.size() < 2) throw ParseError(line_no, tok[0].col, "states section is empty");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!state_index.try_emplace(tok[i].text, static_cast<int>(states.size())).second) {
          throw ParseError(line_no, tok[i].col, "duplicate state name '" + tok[i].text + "'");
        }
        states.push_back(tok[i].text);
      }
      states_seen = true;
    } else if (key == "actions:") {
      if (actions_seen) throw ParseError(line_no, tok[0].col, "duplicate actions section");
      if (tok.size() < 2) throw ParseError(line_no, tok[0].col, "actions section is empty");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!action_index.try_emplace(tok[i].text, static_cast<int>(actions.size())).second) {
          throw ParseError(line_no, tok[i].col, "duplicate action name '" + tok[i].text + "'");
        }
        actions.push_back(tok[i].text);
      }
      actions_seen = true;
    } else if (key == "gamma:") {
      if (gamma_seen) throw ParseError(line_no, tok[0].col, "duplicate gamma section");
      if (tok.size() != 2) throw ParseError(line_no, tok[0].col, "gamma takes a single value");
      gamma = number(tok[1], line_no);
      gamma_line = line_no;
      gamma_seen = true;
    } else if (key == "reward:") {
      need_names(line_no, tok[0].col);
      if (tok.size() < 3) {
        throw ParseError(line_no, tok[0].col, "reward record needs a state and a value");
      }
      const int s = resolve_state(tok[1], line_no);
      if (action_index.count(tok[2].text)) {
        throw ParseError(line_no, tok[2].col,
                         "rewards must be a function of the state only; got action '" +
                             tok[2].text + "' (reward records are `reward: <state> <value>`)");
      }
      if (tok.size() != 3) {
        throw ParseError(line_no, tok[3].col, "reward record takes exactly one value");
      }
      const double v = number(tok[2], line_no);
      if (!rewards.emplace(s, std::make_pair(v, line_no)).second) {
        throw ParseError(line_no, tok[1].col,
                         "duplicate reward for state '" + tok[1].text + "'");
      }
    } else if (key == "transition:") {
      need_names(line_no, tok[0].col);
      if (tok.size() < 5 || (tok.size() - 3) % 2 != 0) {
        throw ParseError(line_no, tok[0].col,
                         "transition record is `transition: <state> <action> (<next> <p>)+`");
      }
      const int s = resolve_state(tok[1], line_no);
      const int a = resolve_action(tok[2], line_no);
      RowRecord rec;
      rec.line = line_no;
      rec.row = VectorXd::Zero(static_cast<int>(states.size()));
      for (std::size_t i = 3; i + 1 < tok.size(); i += 2) {
        const int s2 = resolve_state(tok[i], line_no);
        if (rec.row[s2] != 0.0) {
          throw ParseError(line_no, tok[i].col,
                           "duplicate next state '" + tok[i].text + "' in transition record");
        }
        rec.row[s2] = probability(tok[i + 1], line_no);
      }
      if (std::abs(rec.row.sum() - 1.0) > kStochasticRowTol) {
        std::ostringstream os;
        os << "transition probabilities for state '" << tok[1].text << "', action '"
           << tok[2].text << "' sum to " << rec.row.sum() << ", expected 1";
        throw ParseError(line_no, tok[0].col, os.str());
      }
      if (!transition_rows.emplace(std::make_pair(s, a), std::move(rec)).second) {
        throw ParseError(line_no, tok[0].col,
                         "duplicate transition record for state '" + tok[1].text +
                             "', action '" + tok[2].text + "'");
      }
    } else if (key == "policy:") {
      need_names(line_no, tok[0].col);
      if (tok.size() < 4 || (tok.size() - 2) % 2 != 0) {
        throw ParseError(line_no, tok[0].col,
                         "policy record is `policy: <state> (<action> <p>)+`");
      }
      const int s = resolve_state(tok[1], line_no);
      RowRecord rec;
      rec.line = line_no;
      rec.row = VectorXd::Zero(static_cast<int>(actions.size()));
      for (std::size_t i = 2; i + 1 < tok.size(); i += 2) {
        const int a = resolve_action(tok[i], line_no);
        if (rec.row[a] != 0.0) {
          throw ParseError(line_no, tok[i].col,
                           "duplicate action '" + tok[i].text + "' in policy record");
        }
        rec.row[a] = probability(tok[i + 1], line_no);
      }
      if (std::abs(rec.row.sum() - 1.0) > kStochasticRowTol) {
        std::ostringstream os;
        os << "policy probabilities for state '" << tok[1].text << "' sum to "
           << rec.row.sum() << ", expected 1";
        throw ParseError(line_no, tok[0].col, os.str());
      }
      if (!policy_rows.emplace(s, std::move(rec)).second) {
        throw ParseError(line_no, tok[1].col,
                         "duplicate policy record for state '" + tok[1].text + "'");
      }
    } else if (key == "start:") {
      need_names(line_no, tok[0].col);
      if (start_seen) throw ParseError(line_no, tok[0].col, "duplicate start section");
      if (tok.size() < 3 || (tok.size() - 1) % 2 != 0) {
        throw ParseError(line_no, tok[0].col, "start record is `start: (<state> <p>)+`");
      }
      start_row.line = line_no;
      start_row.row = VectorXd::Zero(static_cast<int>(states.size()));
      for (std::size_t i = 1; i + 1 < tok.size(); i += 2) {
        const int s = resolve_state(tok[i], line_no);
        if (start_row.row[s] != 0.0) {
          throw ParseError(line_no, tok[i].col,
                           "duplicate state '" + tok[i].text + "' in start record");
        }
        start_row.row[s] = probability(tok[i + 1], line_no);
      }
      if (std::abs(start_row.row.sum() - 1.0) > kStochasticRowTol) {
        std::ostringstream os;
        os << "start probabilities sum to " << start_row.row.sum() << ", expected 1";
        throw ParseError(line_no, tok[0].col, os.str());
      }
      start_seen = true;
    } else {
      throw ParseError(line_no, tok[0].col, "unknown section '" + key + "'");
    }
  }

  if (!states_seen) throw ParseError(line_no, 1, "missing states section");
  if (!actions_seen) throw ParseError(line_no, 1, "missing actions section");
  if (!gamma_seen) throw ParseError(line_no, 1, "missing gamma section");

  const int S = static_cast<int>(states.size());
  const int A = static_cast<int>(actions.size());
  MdpFileContents contents;
  contents.mdp.state_names = states;
  contents.mdp.action_names = actions;
  contents.mdp.discount = gamma;
  contents.mdp.rewards = VectorXd::Zero(S);
  for (const auto& [s, entry] : rewards) contents.mdp.rewards[s] = entry.first;
  for (int a = 0; a < A; ++a) contents.mdp.transitions.push_back(MatrixXd::Zero(S, S));
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      auto it = transition_rows.find({s, a});
      if (it == transition_rows.end()) {
        throw ParseError(line_no, 1,
                         "missing transition record for state '" + states[s] +
                             "', action '" + actions[a] + "'");
      }
      contents.mdp.transitions[a].row(s) = it->second.row.transpose();
    }
  }

  ValidationResult validation = validate_mdp(contents.mdp);
  if (!validation.ok()) {
    // Row structure was checked per record, so what remains points at gamma
    // or file-level structure.
    const int line = gamma_line > 0 ? gamma_line : line_no;
    throw ParseError(line, 1, "invalid MDP: " + validation.summary());
  }

  contents.policy = uniform_policy(contents.mdp);
  contents.policy_specified = !policy_rows.empty();
  for (const auto& [s, rec] : policy_rows) {
    contents.policy.probs.row(s) = rec.row.transpose();
  }
  contents.start = uniform_occupancy(S);
  contents.start_specified = start_seen;
  if (start_seen) contents.start.probs = start_row.row;
  return contents;
}

MdpFileContents load_mdp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open MDP file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mdp_file(buffer.str());
}

std::string format_double(double value) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double back = 0.0;
    if (parse_number(buf, back) && back == value) return buf;
  }
  return buf;
}

std::string export_mdp_file(const TabularMDP& mdp, const Policy& policy,
                            const Occupancy& start) {
  std::ostringstream os;
  os << "states:";
  for (const auto& name : mdp.state_names) os << ' ' << name;
  os << "\nactions:";
  for (const auto& name : mdp.action_names) os << ' ' << name;
  os << "\ngamma: " << format_double(mdp.discount) << '\n';
  for (int s = 0; s < mdp.num_states(); ++s) {
    os << "reward: " << mdp.state_names[s] << ' ' << format_double(mdp.rewards[s]) << '\n';
  }
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      os << "transition: " << mdp.state_names[s] << ' ' << mdp.action_names[a];
      for (int s2 = 0; s2 < mdp.num_states(); ++s2) {
        const double p = mdp.transitions[a](s, s2);
        if (p != 0.0) os << ' ' << mdp.state_names[s2] << ' ' << format_double(p);
      }
      os << '\n';
    }
  }
  for (int s = 0; s < mdp.num_states(); ++s) {
    os << "policy: " << mdp.state_names[s];
    for (int a = 0; a < mdp.num_actions(); ++a) {
      const double p = policy.probs(s, a);
      if (p != 0.0) os << ' ' << mdp.action_names[a] << ' ' << format_double(p);
    }
    os << '\n';
  }
  os << "start:";
  for (int s = 0; s < mdp.num_states(); ++s) {
    const double p = start.probs[s];
    if (p != 0.0) os << ' ' << mdp.state_names[s] << ' ' << format_double(p);
  }
  os << '\n';
  return os.str();
}

}  // namespace repsuff
