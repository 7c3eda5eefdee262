//! Netlist parsing and ideal-opamp modified nodal analysis.
//!
//! The solver stamps `G + sC` admittances and nullor constraints into a
//! matrix of first-degree polynomials and eliminates it fraction-free
//! (Bareiss) in exact integer arithmetic, so the transfer function comes out
//! as a ratio of polynomials rather than a sampled frequency response.
//!
//! # Netlist format
//!
//! ```text
//! # comment
//! R<name> <node> <node> <value>
//! C<name> <node> <node> <value>
//! O<name> <in+> <in-> <out>
//! .in <node>
//! .out <node>
//! ```
//!
//! Node `0` is ground. Values take an optional suffix `p n u m k M`
//! (`K` is accepted for kilo as well).

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exact::{common_exponent, ratio, to_scaled_int, IntPoly};
use crate::ratfunc::{Polynomial, RationalFunction};
use crate::{Error, Result};

pub type NodeId = usize;

pub const GROUND: NodeId = 0;

const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Resistor {
        name: String,
        a: NodeId,
        b: NodeId,
        ohms: f64,
    },
    Capacitor {
        name: String,
        a: NodeId,
        b: NodeId,
        farads: f64,
    },
    /// Ideal opamp: forces `V(plus) = V(minus)` and sources whatever current
    /// its output needs.
    Opamp {
        name: String,
        plus: NodeId,
        minus: NodeId,
        out: NodeId,
    },
}

impl Element {
    pub fn name(&self) -> &str {
        match self {
            Element::Resistor { name, .. }
            | Element::Capacitor { name, .. }
            | Element::Opamp { name, .. } => name,
        }
    }

    fn nodes(&self) -> [NodeId; 3] {
        match *self {
            Element::Resistor { a, b, .. } | Element::Capacitor { a, b, .. } => [a, b, a],
            Element::Opamp { plus, minus, out, .. } => [plus, minus, out],
        }
    }

    fn map_nodes(&mut self, f: impl Fn(NodeId) -> NodeId) {
        match self {
            Element::Resistor { a, b, .. } | Element::Capacitor { a, b, .. } => {
                *a = f(*a);
                *b = f(*b);
            }
            Element::Opamp { plus, minus, out, .. } => {
                *plus = f(*plus);
                *minus = f(*minus);
                *out = f(*out);
            }
        }
    }
}

/// A validated circuit with one voltage input and one observed output.
#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    nodes: Vec<String>,
    elements: Vec<Element>,
    input: NodeId,
    output: NodeId,
}

impl Netlist {
    pub fn builder() -> NetlistBuilder {
        NetlistBuilder::new()
    }

    /// Node names; index 0 is ground.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n == name)
    }

    /// Number of nodes other than ground.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn input(&self) -> NodeId {
        self.input
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn opamp_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Opamp { .. }))
            .count()
    }

    /// Multiplies every resistance by `k` and divides every capacitance by `k`.
    pub fn impedance_scaled(&self, k: f64) -> Netlist {
        let mut out = self.clone();
        for e in &mut out.elements {
            match e {
                Element::Resistor { ohms, .. } => *ohms *= k,
                Element::Capacitor { farads, .. } => *farads /= k,
                Element::Opamp { .. } => {}
            }
        }
        out
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |id: NodeId| self.nodes[id].as_str();
        for e in &self.elements {
            match e {
                Element::Resistor { name, a, b, ohms } => {
                    writeln!(f, "{name} {} {} {ohms:e}", n(*a), n(*b))?
                }
                Element::Capacitor { name, a, b, farads } => {
                    writeln!(f, "{name} {} {} {farads:e}", n(*a), n(*b))?
                }
                Element::Opamp { name, plus, minus, out } => {
                    writeln!(f, "{name} {} {} {}", n(*plus), n(*minus), n(*out))?
                }
            }
        }
        writeln!(f, ".in {}", n(self.input))?;
        writeln!(f, ".out {}", n(self.output))
    }
}

/// Incremental construction of a [`Netlist`]; nodes are created on first use.
#[derive(Debug, Clone)]
pub struct NetlistBuilder {
    nodes: Vec<String>,
    index: HashMap<String, NodeId>,
    elements: Vec<Element>,
    input: Option<String>,
    output: Option<String>,
}

impl Default for NetlistBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl NetlistBuilder {
    pub fn new() -> Self {
        let mut index = HashMap::new();
        index.insert("0".to_string(), GROUND);
        Self {
            nodes: vec!["0".to_string()],
            index,
            elements: Vec::new(),
            input: None,
            output: None,
        }
    }

    fn node(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    fn prefixed(prefix: char, name: &str) -> String {
        if name.starts_with(prefix) || name.starts_with(prefix.to_ascii_lowercase()) {
            name.to_string()
        } else {
            format!("{prefix}{name}")
        }
    }

    pub fn resistor(&mut self, name: &str, a: &str, b: &str, ohms: f64) -> &mut Self {
        let (a, b) = (self.node(a), self.node(b));
        self.elements.push(Element::Resistor {
            name: Self::prefixed('R', name),
            a,
            b,
            ohms,
        });
        self
    }

    pub fn capacitor(&mut self, name: &str, a: &str, b: &str, farads: f64) -> &mut Self {
        let (a, b) = (self.node(a), self.node(b));
        self.elements.push(Element::Capacitor {
            name: Self::prefixed('C', name),
            a,
            b,
            farads,
        });
        self
    }

    pub fn opamp(&mut self, name: &str, plus: &str, minus: &str, out: &str) -> &mut Self {
        let (plus, minus, out) = (self.node(plus), self.node(minus), self.node(out));
        self.elements.push(Element::Opamp {
            name: Self::prefixed('O', name),
            plus,
            minus,
            out,
        });
        self
    }

    pub fn input(&mut self, node: &str) -> &mut Self {
        self.input = Some(node.to_string());
        self
    }

    pub fn output(&mut self, node: &str) -> &mut Self {
        self.output = Some(node.to_string());
        self
    }

    pub fn build(&self) -> Result<Netlist> {
        let input = self.input.as_deref().ok_or(Error::MissingInput)?;
        let output = self.output.as_deref().ok_or(Error::MissingOutput)?;
        let lookup = |name: &str| {
            self.index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UndeclaredNode(name.to_string()))
        };
        let netlist = Netlist {
            nodes: self.nodes.clone(),
            elements: self.elements.clone(),
            input: lookup(input)?,
            output: lookup(output)?,
        };
        validate(&netlist)?;
        Ok(netlist)
    }
}

fn validate(n: &Netlist) -> Result<()> {
    let invalid = |msg: String| Err(Error::InvalidNetlist(msg));
    if n.input == GROUND {
        return invalid("input cannot be ground".into());
    }
    if n.output == GROUND {
        return invalid("output cannot be ground".into());
    }
    let used: HashSet<NodeId> = n.elements.iter().flat_map(|e| e.nodes()).collect();
    for &id in &[n.input, n.output] {
        if !used.contains(&id) {
            return Err(Error::UndeclaredNode(n.nodes[id].clone()));
        }
    }
    if !used.contains(&GROUND) {
        return Err(Error::MissingGround);
    }
    let mut names = HashSet::new();
    let mut driven = HashSet::new();
    for e in &n.elements {
        if !names.insert(e.name().to_ascii_uppercase()) {
            return invalid(format!("duplicate element name {}", e.name()));
        }
        match *e {
            Element::Resistor { ohms: v, .. } | Element::Capacitor { farads: v, .. } => {
                if !(v > 0.0 && v.is_finite()) {
                    return invalid(format!("{} must have a positive value", e.name()));
                }
            }
            Element::Opamp { out, .. } => {
                if out == GROUND || out == n.input {
                    return invalid(format!("{} output cannot drive ground or the input", e.name()));
                }
                if !driven.insert(out) {
                    return invalid(format!(
                        "node {} is driven by more than one opamp",
                        n.nodes[out]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Parses a value with an optional engineering suffix.
pub fn parse_value(token: &str) -> Option<f64> {
    let exponent = match token.chars().last()? {
        'p' => -12,
        'n' => -9,
        'u' => -6,
        'm' => -3,
        'k' | 'K' => 3,
        'M' => 6,
        _ => return token.parse().ok(),
    };
    let body = &token[..token.len() - 1];
    if body.contains(['e', 'E']) {
        return body.parse::<f64>().ok().map(|v| v * 10f64.powi(exponent));
    }
    // Decimal mantissa with a shifted exponent parses without extra rounding.
    format!("{body}e{exponent}").parse().ok()
}

/// Parses the line-oriented netlist format described in the module docs.
pub fn parse_netlist(text: &str) -> Result<Netlist> {
    let mut b = NetlistBuilder::new();
    let mut input_seen = false;
    let mut output_seen = false;
    let mut names = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let head = fields[0];
        if let Some(directive) = head.strip_prefix('.') {
            if fields.len() != 2 {
                return Err(syntax(format!("`{head}` takes exactly one node")));
            }
            match directive.to_ascii_lowercase().as_str() {
                "in" => {
                    if input_seen {
                        return Err(Error::DuplicateInput { line: line_no });
                    }
                    input_seen = true;
                    b.input(fields[1]);
                }
                "out" => {
                    if output_seen {
                        return Err(syntax("duplicate .out directive".into()));
                    }
                    output_seen = true;
                    b.output(fields[1]);
                }
                _ => return Err(syntax(format!("unknown directive `{head}`"))),
            }
            continue;
        }
        if fields.len() != 4 {
            return Err(syntax(format!("expected 4 fields, found {}", fields.len())));
        }
        if !names.insert(head.to_ascii_uppercase()) {
            return Err(syntax(format!("duplicate element name `{head}`")));
        }
        let value = || {
            parse_value(fields[3])
                .filter(|v| *v > 0.0 && v.is_finite())
                .ok_or_else(|| syntax(format!("invalid value `{}`", fields[3])))
        };
        match head.chars().next().map(|c| c.to_ascii_uppercase()) {
            Some('R') => {
                let v = value()?;
                b.resistor(head, fields[1], fields[2], v);
            }
            Some('C') => {
                let v = value()?;
                b.capacitor(head, fields[1], fields[2], v);
            }
            Some('O') => {
                b.opamp(head, fields[1], fields[2], fields[3]);
            }
            _ => return Err(syntax(format!("unknown element `{head}`"))),
        }
    }
    b.build()
}

/// Square matrix of exact first-degree polynomials in `s`.
///
/// Entries are integers times a common power of two (`2^exponent`), so
/// stamping and elimination are free of rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    dim: usize,
    exponent: i32,
    entries: Vec<IntPoly>,
}

impl PolyMatrix {
    fn zeros(dim: usize, exponent: i32) -> Self {
        Self {
            dim,
            exponent,
            entries: vec![IntPoly::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(r, c)` as a floating-point polynomial.
    pub fn get(&self, r: usize, c: usize) -> Polynomial {
        let unit = BigInt::from(1) << (-self.exponent).max(0) as usize;
        let p = &self.entries[r * self.dim + c];
        let scale = 2f64.powi(self.exponent.max(0));
        Polynomial::new(
            p.coeffs()
                .iter()
                .map(|c| ratio(c, &unit) * scale)
                .collect::<Vec<_>>(),
        )
    }

    fn add(&mut self, r: usize, c: usize, p: &IntPoly) {
        let e = &mut self.entries[r * self.dim + c];
        *e = &*e + p;
    }

    /// Fraction-free (Bareiss) determinant, in units of `2^(exponent·dim)`.
    /// Each division by the previous pivot is exact.
    fn determinant(&self) -> IntPoly {
        let n = self.dim;
        if n == 0 {
            return IntPoly::constant(BigInt::from(1));
        }
        let mut m: Vec<Vec<IntPoly>> = self.entries.chunks(n).map(|r| r.to_vec()).collect();
        let mut negate = false;
        let mut prev = IntPoly::constant(BigInt::from(1));
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return IntPoly::zero();
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = t.div_exact(&prev);
                }
                m[i][k] = IntPoly::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            -&det
        } else {
            det
        }
    }
}

/// Assembled nodal equations `A·x = b` with the input voltage fixed to 1.
///
/// Unknowns are the voltages of every node except ground and the input,
/// followed by one output current per opamp.
#[derive(Debug, Clone)]
pub struct MnaSystem {
    pub matrix: PolyMatrix,
    rhs: Vec<IntPoly>,
    /// Unknown index of the output voltage.
    pub output: usize,
}

/// Stamps the circuit with exact integer coefficients.
pub fn assemble(n: &Netlist) -> MnaSystem {
    let admittance = |e: &Element| match *e {
        Element::Resistor { a, b, ohms, .. } => Some((a, b, 1.0 / ohms, 0)),
        Element::Capacitor { a, b, farads, .. } => Some((a, b, farads, 1)),
        Element::Opamp { .. } => None,
    };
    let exponent = common_exponent(
        n.elements
            .iter()
            .filter_map(admittance)
            .map(|(_, _, v, _)| v)
            .chain([1.0]),
    );

    let mut unknown = vec![None; n.nodes.len()];
    let mut dim = 0;
    for (id, slot) in unknown.iter_mut().enumerate() {
        if id != GROUND && id != n.input {
            *slot = Some(dim);
            dim += 1;
        }
    }
    let opamps: Vec<_> = n
        .elements
        .iter()
        .filter_map(|e| match *e {
            Element::Opamp { plus, minus, out, .. } => Some((plus, minus, out)),
            _ => None,
        })
        .collect();
    let first_opamp = dim;
    dim += opamps.len();

    let mut a = PolyMatrix::zeros(dim, exponent);
    let mut rhs = vec![IntPoly::zero(); dim];

    for (na, nb, value, power) in n.elements.iter().filter_map(admittance) {
        let y = IntPoly::monomial(to_scaled_int(value, exponent), power);
        for (this, other) in [(na, nb), (nb, na)] {
            let Some(row) = unknown[this] else { continue };
            a.add(row, row, &y);
            match unknown[other] {
                Some(col) => a.add(row, col, &-&y),
                None if other == n.input => rhs[row] = &rhs[row] + &y,
                None => {}
            }
        }
    }

    let one = IntPoly::constant(to_scaled_int(1.0, exponent));
    for (k, &(plus, minus, out)) in opamps.iter().enumerate() {
        let current = first_opamp + k;
        if let Some(row) = unknown[out] {
            a.add(row, current, &one);
        }
        // Constraint row: V(plus) - V(minus) = 0.
        for (node, unit) in [(plus, one.clone()), (minus, -&one)] {
            match unknown[node] {
                Some(col) => a.add(current, col, &unit),
                None if node == n.input => rhs[current] = &rhs[current] - &unit,
                None => {}
            }
        }
    }

    MnaSystem {
        matrix: a,
        rhs,
        output: unknown[n.output].expect("output is neither ground nor input"),
    }
}

/// `V(output) / V(input)` as a rational function of `s`, by Cramer's rule on
/// two fraction-free determinants. Elimination is exact; the only rounding
/// is in forming `1/R` and in the final conversion of each coefficient.
pub fn transfer_function(n: &Netlist) -> Result<RationalFunction> {
    if n.output == n.input {
        return Ok(RationalFunction::constant(1.0));
    }
    let sys = assemble(n);
    let den = sys.matrix.determinant();
    if den.is_zero() {
        return Err(Error::Singular);
    }
    let mut replaced = sys.matrix.clone();
    for (r, b) in sys.rhs.iter().enumerate() {
        replaced.entries[r * replaced.dim + sys.output] = b.clone();
    }
    let num = replaced.determinant();

    let origin = num.low_zeros().min(den.low_zeros());
    let (num, den) = (num.shift_down(origin), den.shift_down(origin));
    let content = num.content().gcd(&den.content());
    let (num, den) = (num.div_scalar(&content), den.div_scalar(&content));

    let degree = num.degree().max(den.degree());
    if degree > MAX_DEGREE {
        return Err(Error::DegreeOverflow(degree));
    }
    let norm = match den.coeffs() {
        [c0, ..] if !c0.is_zero() => c0.clone(),
        cs => cs[cs.len() - 1].clone(),
    };
    let to_f64 = |p: &IntPoly| {
        Polynomial::new(p.coeffs().iter().map(|c| ratio(c, &norm)).collect::<Vec<_>>())
    };
    RationalFunction::new(to_f64(&num), to_f64(&den))
}

/// Exchanges the input node and ground throughout the circuit, turning the
/// inverting bandpass stage into its noninverting counterpart (and back).
///
/// Requires a single opamp with one input on ground or on the input node and
/// the other input on an internal node.
pub fn noninverting_variant(n: &Netlist) -> Result<Netlist> {
    let mismatch = |m: &str| Err(Error::TopologyMismatch(m.to_string()));
    let opamps: Vec<_> = n
        .elements
        .iter()
        .filter_map(|e| match *e {
            Element::Opamp { plus, minus, .. } => Some((plus, minus)),
            _ => None,
        })
        .collect();
    let [(plus, minus)] = opamps[..] else {
        return mismatch("expected exactly one opamp");
    };
    let anchored = |x: NodeId| x == GROUND || x == n.input;
    if anchored(plus) == anchored(minus) {
        return mismatch("exactly one opamp input must sit on ground or the input node");
    }
    let input = n.input;
    let swap = move |x: NodeId| match x {
        GROUND => input,
        x if x == input => GROUND,
        x => x,
    };
    let mut out = n.clone();
    for e in &mut out.elements {
        e.map_nodes(swap);
    }
    validate(&out)?;
    Ok(out)
}
