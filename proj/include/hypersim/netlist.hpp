// Copyright 2026 the hypersim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hypersim/gate.hpp"

namespace hypersim {

// ---------------------------------------------------------------------------
// Line-oriented circuit netlists.
//
// Declarations (before first use):
//   photon <id> spatial(<id> [, <id>]...)
//   nv <id> init (plus | minus | plusminus | minusplus)
//
// Statements:
//   STEP <n>                       checkpoint group for what follows
//   H <photon> [<mode>]            polarization Hadamard plate
//   X <photon> [<mode>]            polarization bit-flip plate
//   BS <photon> <mode> <mode>      balanced beam splitter
//   NV <nv> <photon> [<mode>] (direct | xconj | both)
//   NVSPLIT <nv> <photon>          interferometer split stage
//   NVMERGE <nv> <nv> <photon>     interferometer close stage (first cavity,
//                                  then second)
//   DUMP <photon> <mode>           terminate a spatial path
//   MEASURE <nv>
//   FF default
//
// '#' starts a comment. Photons map to the tensor slots in declaration
// order; modes map by position within their declaration.
// ---------------------------------------------------------------------------

struct NetlistError : std::runtime_error {
    int line;
    int column;
    NetlistError(int line_, int column_, const std::string& message)
        : std::runtime_error("netlist:" + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + message),
          line(line_),
          column(column_) {}
};

struct NetlistDocument {
    struct PhotonDecl {
        std::string name;
        std::vector<std::string> modes;
        bool operator==(const PhotonDecl&) const = default;
    };
    struct NvDecl {
        std::string name;
        SpinInit init = SpinInit::plus_minus;
        bool operator==(const NvDecl&) const = default;
    };
    std::vector<PhotonDecl> photons;
    std::vector<NvDecl> nvs;
    CircuitScript script;

    bool operator==(const NetlistDocument&) const = default;
};

namespace netlist_detail {

struct Token {
    std::string text;
    int column;  // 1-based
};

inline std::vector<Token> tokenize_line(const std::string& line) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(' || c == ')' || c == ',') {
            tokens.push_back({std::string(1, c), static_cast<int>(i) + 1});
            ++i;
            continue;
        }
        const size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '(' && line[i] != ')' && line[i] != ',' && line[i] != '#')
            ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

struct Cursor {
    const std::vector<Token>& tokens;
    size_t pos = 0;
    int line;

    bool done() const { return pos >= tokens.size(); }
    const Token& peek() const {
        if (done()) throw NetlistError(line, last_column(), "unexpected end of line");
        return tokens[pos];
    }
    Token next() {
        const Token& t = peek();
        ++pos;
        return t;
    }
    void expect(const std::string& text) {
        const Token t = next();
        if (t.text != text)
            throw NetlistError(line, t.column, "expected '" + text + "', got '" + t.text +
                                                   "'");
    }
    void expect_end() const {
        if (!done())
            throw NetlistError(line, tokens[pos].column,
                               "unexpected trailing token '" + tokens[pos].text + "'");
    }
    int last_column() const {
        if (tokens.empty()) return 1;
        const Token& t = tokens.back();
        return t.column + static_cast<int>(t.text.size());
    }
};

}  // namespace netlist_detail

inline NetlistDocument parse_netlist(const std::string& text) {
    using netlist_detail::Cursor;
    using netlist_detail::Token;

    NetlistDocument doc;
    std::map<std::string, int> photon_slot;              // name -> tensor slot
    std::map<std::string, std::pair<int, int>> mode_of;  // name -> (slot, mode index)
    std::map<std::string, int> nv_of;                    // name -> 1-based index
    std::array<SpatialFilter, 3> declared_modes{};       // per slot
    bool seen_statement = false;
    bool seen_measurement = false;
    bool seen_ff = false;
    int current_step = 0;
    int split_pending = 0;  // slot+1 of an open NVSPLIT, 0 if none

    auto lookup_photon = [&](const Token& t, int line) {
        auto it = photon_slot.find(t.text);
        if (it == photon_slot.end())
            throw NetlistError(line, t.column,
                               "use of undeclared photon '" + t.text + "'");
        return it->second;
    };
    auto lookup_nv = [&](const Token& t, int line) {
        auto it = nv_of.find(t.text);
        if (it == nv_of.end())
            throw NetlistError(line, t.column, "use of undeclared nv '" + t.text + "'");
        return it->second;
    };
    auto lookup_mode = [&](const Token& t, int slot, int line) {
        auto it = mode_of.find(t.text);
        if (it == mode_of.end())
            throw NetlistError(line, t.column, "use of undeclared mode '" + t.text + "'");
        if (it->second.first != slot)
            throw NetlistError(line, t.column,
                               "mode '" + t.text + "' belongs to another photon");
        return it->second.second;
    };

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::vector<Token> tokens = netlist_detail::tokenize_line(raw);
        if (tokens.empty()) continue;
        Cursor cur{tokens, 0, line_no};
        const Token head = cur.next();

        if (head.text == "photon") {
            if (seen_statement)
                throw NetlistError(line_no, head.column,
                                   "declarations must precede statements");
            const Token name = cur.next();
            if (photon_slot.count(name.text))
                throw NetlistError(line_no, name.column,
                                   "photon '" + name.text + "' already declared");
            if (doc.photons.size() >= 3)
                throw NetlistError(line_no, name.column, "at most three photons");
            const int slot = static_cast<int>(doc.photons.size());
            cur.expect("spatial");
            cur.expect("(");
            NetlistDocument::PhotonDecl decl;
            decl.name = name.text;
            while (true) {
                const Token mode = cur.next();
                if (mode.text == ")" || mode.text == ",")
                    throw NetlistError(line_no, mode.column, "expected a mode name");
                if (mode_of.count(mode.text))
                    throw NetlistError(line_no, mode.column,
                                       "mode '" + mode.text + "' already declared");
                if (static_cast<int>(decl.modes.size()) >= kSpatialDim[slot])
                    throw NetlistError(line_no, mode.column,
                                       "too many spatial modes for this photon slot");
                mode_of[mode.text] = {slot, static_cast<int>(decl.modes.size())};
                decl.modes.push_back(mode.text);
                const Token sep = cur.next();
                if (sep.text == ")") break;
                if (sep.text != ",")
                    throw NetlistError(line_no, sep.column, "expected ',' or ')'");
            }
            cur.expect_end();
            photon_slot[name.text] = slot;
            SpatialFilter f;
            for (size_t m = 0; m < decl.modes.size(); ++m)
                f.mask = static_cast<uint8_t>(f.mask | (1u << m));
            declared_modes[static_cast<size_t>(slot)] = f;
            doc.photons.push_back(std::move(decl));
            continue;
        }

        if (head.text == "nv") {
            if (seen_statement)
                throw NetlistError(line_no, head.column,
                                   "declarations must precede statements");
            const Token name = cur.next();
            if (nv_of.count(name.text))
                throw NetlistError(line_no, name.column,
                                   "nv '" + name.text + "' already declared");
            if (doc.nvs.size() >= 4)
                throw NetlistError(line_no, name.column, "at most four NV spins");
            cur.expect("init");
            const Token init = cur.next();
            SpinInit spin;
            if (init.text == "plus") spin = SpinInit::plus;
            else if (init.text == "minus") spin = SpinInit::minus;
            else if (init.text == "plusminus") spin = SpinInit::plus_minus;
            else if (init.text == "minusplus") spin = SpinInit::minus_plus;
            else
                throw NetlistError(line_no, init.column,
                                   "unknown init '" + init.text + "'");
            cur.expect_end();
            const int index = static_cast<int>(doc.nvs.size()) + 1;
            nv_of[name.text] = index;
            doc.script.spin_init[static_cast<size_t>(index - 1)] = spin;
            doc.nvs.push_back({name.text, spin});
            continue;
        }

        // Statement forms.
        seen_statement = true;
        auto require_no_measurements = [&](const Token& t) {
            if (seen_measurement || seen_ff)
                throw NetlistError(line_no, t.column,
                                   "elements must precede measurements");
        };

        if (head.text == "STEP") {
            require_no_measurements(head);
            const Token n = cur.next();
            try {
                current_step = std::stoi(n.text);
            } catch (...) {
                throw NetlistError(line_no, n.column, "STEP expects an integer");
            }
            if (current_step <= 0)
                throw NetlistError(line_no, n.column, "STEP expects a positive integer");
            cur.expect_end();
            continue;
        }

        if (head.text == "H" || head.text == "X") {
            require_no_measurements(head);
            Element e;
            e.kind = head.text == "H" ? ElementKind::hwp_h : ElementKind::hwp_x;
            e.step = current_step;
            const Token photon = cur.next();
            const int slot = lookup_photon(photon, line_no);
            e.photon = static_cast<Photon>(slot);
            if (!cur.done()) {
                const Token mode = cur.next();
                e.filter = SpatialFilter::single(lookup_mode(mode, slot, line_no));
            } else {
                e.filter = declared_modes[static_cast<size_t>(slot)];
            }
            cur.expect_end();
            if (split_pending == slot + 1)
                throw NetlistError(line_no, head.column,
                                   "photon is inside an open NVSPLIT section");
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "BS") {
            require_no_measurements(head);
            Element e;
            e.kind = ElementKind::bs;
            e.step = current_step;
            const Token photon = cur.next();
            const int slot = lookup_photon(photon, line_no);
            e.photon = static_cast<Photon>(slot);
            const Token m1 = cur.next();
            const Token m2 = cur.next();
            e.mode1 = lookup_mode(m1, slot, line_no);
            e.mode2 = lookup_mode(m2, slot, line_no);
            if (e.mode1 == e.mode2)
                throw NetlistError(line_no, m2.column, "BS needs two distinct modes");
            cur.expect_end();
            if (split_pending == slot + 1)
                throw NetlistError(line_no, head.column,
                                   "photon is inside an open NVSPLIT section");
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "NV") {
            require_no_measurements(head);
            Element e;
            e.kind = ElementKind::cavity;
            e.step = current_step;
            const Token nv = cur.next();
            e.nv = lookup_nv(nv, line_no);
            const Token photon = cur.next();
            const int slot = lookup_photon(photon, line_no);
            e.photon = static_cast<Photon>(slot);
            Token routing = cur.next();
            if (!cur.done()) {
                // A mode was given before the routing keyword.
                e.filter = SpatialFilter::single(lookup_mode(routing, slot, line_no));
                routing = cur.next();
            } else {
                e.filter = declared_modes[static_cast<size_t>(slot)];
            }
            if (routing.text == "direct") e.routing = Routing::direct;
            else if (routing.text == "xconj") e.routing = Routing::x_conj;
            else if (routing.text == "both") e.routing = Routing::both;
            else
                throw NetlistError(line_no, routing.column,
                                   "unknown routing '" + routing.text + "'");
            cur.expect_end();
            if (split_pending == slot + 1)
                throw NetlistError(line_no, head.column,
                                   "photon is inside an open NVSPLIT section");
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "HNV") {
            require_no_measurements(head);
            Element e;
            e.kind = ElementKind::nv_hadamard;
            e.step = current_step;
            const Token nv = cur.next();
            e.nv = lookup_nv(nv, line_no);
            cur.expect_end();
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "NVSPLIT") {
            require_no_measurements(head);
            Element e;
            e.kind = ElementKind::nv_split;
            e.step = current_step;
            const Token nv = cur.next();
            e.nv = lookup_nv(nv, line_no);
            const Token photon = cur.next();
            const int slot = lookup_photon(photon, line_no);
            if (slot != 2)
                throw NetlistError(line_no, photon.column,
                                   "NVSPLIT needs the three-mode photon slot");
            e.photon = static_cast<Photon>(slot);
            cur.expect_end();
            if (split_pending != 0)
                throw NetlistError(line_no, head.column, "NVSPLIT already open");
            split_pending = slot + 1;
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "NVMERGE") {
            require_no_measurements(head);
            Element e;
            e.kind = ElementKind::nv_merge;
            e.step = current_step;
            const Token nv_first = cur.next();
            e.nv_first = lookup_nv(nv_first, line_no);
            const Token nv_second = cur.next();
            e.nv = lookup_nv(nv_second, line_no);
            const Token photon = cur.next();
            const int slot = lookup_photon(photon, line_no);
            if (slot != 2)
                throw NetlistError(line_no, photon.column,
                                   "NVMERGE needs the three-mode photon slot");
            e.photon = static_cast<Photon>(slot);
            cur.expect_end();
            if (split_pending != slot + 1)
                throw NetlistError(line_no, head.column, "NVMERGE without open NVSPLIT");
            split_pending = 0;
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "DUMP") {
            require_no_measurements(head);
            Element e;
            e.kind = ElementKind::dump;
            e.step = current_step;
            const Token photon = cur.next();
            const int slot = lookup_photon(photon, line_no);
            e.photon = static_cast<Photon>(slot);
            const Token mode = cur.next();
            e.mode1 = lookup_mode(mode, slot, line_no);
            cur.expect_end();
            if (split_pending == slot + 1)
                throw NetlistError(line_no, head.column,
                                   "photon is inside an open NVSPLIT section");
            doc.script.elements.push_back(e);
            continue;
        }

        if (head.text == "MEASURE") {
            if (seen_ff)
                throw NetlistError(line_no, head.column,
                                   "measurements must precede feed-forward");
            const Token nv = cur.next();
            const int index = lookup_nv(nv, line_no);
            for (int existing : doc.script.measurement_order)
                if (existing == index)
                    throw NetlistError(line_no, nv.column,
                                       "nv '" + nv.text + "' measured twice");
            cur.expect_end();
            if (split_pending != 0)
                throw NetlistError(line_no, head.column,
                                   "measurement inside an open NVSPLIT section");
            seen_measurement = true;
            doc.script.measurement_order.push_back(index);
            continue;
        }

        if (head.text == "FF") {
            const Token table = cur.next();
            if (table.text != "default")
                throw NetlistError(line_no, table.column,
                                   "unknown feed-forward table '" + table.text + "'");
            cur.expect_end();
            if (doc.script.measurement_order.size() != 4)
                throw NetlistError(line_no, head.column,
                                   "feed-forward needs all four NVs measured");
            seen_ff = true;
            doc.script.feed_forward = true;
            continue;
        }

        throw NetlistError(line_no, head.column,
                           "unknown directive '" + head.text + "'");
    }

    if (split_pending != 0)
        throw NetlistError(line_no + 1, 1, "NVSPLIT without a closing NVMERGE");
    return doc;
}

// ---------------------------------------------------------------------------
// Canonical printing; parse(print(parse(text))) is a fixed point.
// ---------------------------------------------------------------------------

inline std::string print_netlist(const NetlistDocument& doc) {
    std::ostringstream os;
    for (const auto& p : doc.photons) {
        os << "photon " << p.name << " spatial(";
        for (size_t i = 0; i < p.modes.size(); ++i) {
            if (i) os << ", ";
            os << p.modes[i];
        }
        os << ")\n";
    }
    for (const auto& n : doc.nvs) {
        os << "nv " << n.name << " init ";
        switch (n.init) {
            case SpinInit::plus: os << "plus"; break;
            case SpinInit::minus: os << "minus"; break;
            case SpinInit::plus_minus: os << "plusminus"; break;
            case SpinInit::minus_plus: os << "minusplus"; break;
        }
        os << "\n";
    }

    auto photon_name = [&](Photon p) {
        return doc.photons[static_cast<size_t>(static_cast<int>(p))].name;
    };
    auto mode_name = [&](Photon p, int mode) {
        return doc.photons[static_cast<size_t>(static_cast<int>(p))]
            .modes[static_cast<size_t>(mode)];
    };
    auto nv_name = [&](int index) { return doc.nvs[static_cast<size_t>(index - 1)].name; };
    auto filter_suffix = [&](const Element& e) {
        const auto& declared =
            doc.photons[static_cast<size_t>(static_cast<int>(e.photon))].modes;
        SpatialFilter all;
        for (size_t m = 0; m < declared.size(); ++m)
            all.mask = static_cast<uint8_t>(all.mask | (1u << m));
        if (e.filter == all) return std::string{};
        for (size_t m = 0; m < declared.size(); ++m)
            if (e.filter == SpatialFilter::single(static_cast<int>(m)))
                return " " + declared[m];
        throw std::invalid_argument("print_netlist: filter not expressible");
    };

    int current_step = 0;
    for (const Element& e : doc.script.elements) {
        if (e.step != current_step && e.step > 0) {
            os << "STEP " << e.step << "\n";
            current_step = e.step;
        }
        switch (e.kind) {
            case ElementKind::hwp_h:
                os << "H " << photon_name(e.photon) << filter_suffix(e) << "\n";
                break;
            case ElementKind::hwp_x:
                os << "X " << photon_name(e.photon) << filter_suffix(e) << "\n";
                break;
            case ElementKind::bs:
                os << "BS " << photon_name(e.photon) << ' ' << mode_name(e.photon, e.mode1)
                   << ' ' << mode_name(e.photon, e.mode2) << "\n";
                break;
            case ElementKind::cavity: {
                os << "NV " << nv_name(e.nv) << ' ' << photon_name(e.photon)
                   << filter_suffix(e) << ' ';
                switch (e.routing) {
                    case Routing::direct: os << "direct"; break;
                    case Routing::x_conj: os << "xconj"; break;
                    case Routing::both: os << "both"; break;
                }
                os << "\n";
                break;
            }
            case ElementKind::nv_hadamard:
                os << "HNV " << nv_name(e.nv) << "\n";
                break;
            case ElementKind::nv_split:
                os << "NVSPLIT " << nv_name(e.nv) << ' ' << photon_name(e.photon) << "\n";
                break;
            case ElementKind::nv_merge:
                os << "NVMERGE " << nv_name(e.nv_first) << ' ' << nv_name(e.nv) << ' '
                   << photon_name(e.photon) << "\n";
                break;
            case ElementKind::dump:
                os << "DUMP " << photon_name(e.photon) << ' '
                   << mode_name(e.photon, e.mode1) << "\n";
                break;
            case ElementKind::spatial_phase:
            case ElementKind::pol_sigma_z:
                throw std::invalid_argument(
                    "print_netlist: feed-forward corrections are not statements");
        }
    }
    for (int nv : doc.script.measurement_order) os << "MEASURE " << nv_name(nv) << "\n";
    if (doc.script.feed_forward) os << "FF default\n";
    return os.str();
}

}  // namespace hypersim
