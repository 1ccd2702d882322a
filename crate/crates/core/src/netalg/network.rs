//! Generic signal-flow interconnection of one-port and two-port elements.
//!
//! Every element input port is an unknown signal. Each input is driven by
//! exactly one source: either the external vacuum input or an output port
//! of some element, which is itself a linear combination of that element's
//! inputs. Collecting the unknowns gives `x = M(ω) x + v`, solved densely.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{chi, delay_response, reflection_sys, scattering, FilterCavityParams, OptoCavityParams};
use crate::error::{Error, Result};

/// Reciprocal-condition threshold below which `I − M(ω)` is treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Optomechanical cavity as a one-port reflector; its intracavity field
    /// can be tapped.
    OptoCavity(OptoCavityParams),
    /// Two-sided filter cavity, ports 0 and 1 are the two mirrors.
    Filter(FilterCavityParams),
    /// Propagation delay of `tau` seconds.
    Delay { tau: f64 },
    Identity,
}

impl Element {
    pub fn ports(&self) -> usize {
        match self {
            Element::Filter(_) => 2,
            _ => 1,
        }
    }

    fn response(&self, out: usize, inp: usize, omega: f64) -> Complex64 {
        match self {
            Element::OptoCavity(cav) => reflection_sys(cav, omega),
            Element::Filter(f) => scattering(f, omega).entry(out, inp),
            Element::Delay { tau } => delay_response(*tau, omega),
            Element::Identity => Complex64::new(1.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Port {
    pub element: usize,
    pub port: usize,
}

impl Port {
    pub fn new(element: usize, port: usize) -> Self {
        Self { element, port }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// The single vacuum-driven external input.
    External,
    /// An element output port.
    Output(Port),
}

/// Directed wiring of elements. An edge `(source, sink)` drives input port
/// `sink` with `source`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    elements: Vec<Element>,
    wiring: Vec<(Source, Port)>,
    tap: usize,
    offsets: Vec<usize>,
}

impl NetworkSpec {
    pub fn new(elements: Vec<Element>, wiring: Vec<(Source, Port)>, tap: usize) -> Result<Self> {
        let malformed = |msg: String| Err(Error::MalformedNetwork(msg));

        match elements.get(tap) {
            Some(Element::OptoCavity(_)) => {}
            _ => return malformed(format!("tap {tap} is not an optomechanical cavity")),
        }
        for el in &elements {
            match el {
                Element::OptoCavity(c) => c.validate()?,
                Element::Filter(f) => f.validate()?,
                Element::Delay { tau } if !(tau.is_finite() && *tau >= 0.0) => {
                    return malformed(format!("delay tau must be >= 0, got {tau}"))
                }
                _ => {}
            }
        }

        let mut offsets = Vec::with_capacity(elements.len());
        let mut n = 0;
        for el in &elements {
            offsets.push(n);
            n += el.ports();
        }

        let check_port = |p: &Port| -> Result<()> {
            match elements.get(p.element) {
                Some(el) if p.port < el.ports() => Ok(()),
                _ => Err(Error::MalformedNetwork(format!(
                    "port {}:{} does not exist",
                    p.element, p.port
                ))),
            }
        };

        let mut driven = vec![0usize; n];
        let mut used_outputs = vec![0usize; n];
        let mut externals = 0;
        for (src, sink) in &wiring {
            check_port(sink)?;
            driven[offsets[sink.element] + sink.port] += 1;
            match src {
                Source::External => externals += 1,
                Source::Output(p) => {
                    check_port(p)?;
                    used_outputs[offsets[p.element] + p.port] += 1;
                }
            }
        }
        if externals != 1 {
            return malformed(format!("expected exactly one external input, found {externals}"));
        }
        if let Some(i) = driven.iter().position(|&d| d != 1) {
            return malformed(format!(
                "input port #{i} has {} driving edges, expected exactly one",
                driven[i]
            ));
        }
        if let Some(i) = used_outputs.iter().position(|&d| d > 1) {
            return malformed(format!("output port #{i} drives more than one input"));
        }

        Ok(Self {
            elements,
            wiring,
            tap,
            offsets,
        })
    }

    /// Optomechanical cavity driven directly by the vacuum input.
    pub fn uncontrolled(cav: OptoCavityParams) -> Result<Self> {
        Self::new(
            vec![Element::OptoCavity(cav)],
            vec![(Source::External, Port::new(0, 0))],
            0,
        )
    }

    /// Notch loop: vacuum enters filter mirror 0, the reflected output drives
    /// the cavity, the cavity output (optionally delayed) enters mirror 1.
    pub fn notch(cav: OptoCavityParams, filter: FilterCavityParams, tau: Option<f64>) -> Result<Self> {
        Self::feedback_loop(cav, filter, tau, 0)
    }

    /// Band-pass loop: vacuum enters filter mirror 0, the transmitted output
    /// at mirror 1 drives the cavity, the cavity output returns to mirror 1.
    pub fn bandpass(cav: OptoCavityParams, filter: FilterCavityParams, tau: Option<f64>) -> Result<Self> {
        Self::feedback_loop(cav, filter, tau, 1)
    }

    fn feedback_loop(
        cav: OptoCavityParams,
        filter: FilterCavityParams,
        tau: Option<f64>,
        drive_port: usize,
    ) -> Result<Self> {
        const CAV: usize = 0;
        const FILTER: usize = 1;
        let mut elements = vec![Element::OptoCavity(cav), Element::Filter(filter)];
        let mut wiring = vec![
            (Source::External, Port::new(FILTER, 0)),
            (Source::Output(Port::new(FILTER, drive_port)), Port::new(CAV, 0)),
        ];
        match tau {
            Some(tau) if tau > 0.0 => {
                elements.push(Element::Delay { tau });
                wiring.push((Source::Output(Port::new(CAV, 0)), Port::new(2, 0)));
                wiring.push((Source::Output(Port::new(2, 0)), Port::new(FILTER, 1)));
            }
            _ => wiring.push((Source::Output(Port::new(CAV, 0)), Port::new(FILTER, 1))),
        }
        Self::new(elements, wiring, CAV)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn wiring(&self) -> &[(Source, Port)] {
        &self.wiring
    }

    pub fn tap(&self) -> usize {
        self.tap
    }

    fn unknowns(&self) -> usize {
        self.elements.iter().map(Element::ports).sum()
    }

    fn index(&self, p: Port) -> usize {
        self.offsets[p.element] + p.port
    }
}

/// Intracavity response at the tap to a unit external input.
pub fn solve_network(net: &NetworkSpec, omega: f64) -> Result<Complex64> {
    let n = net.unknowns();
    let mut a = DMatrix::<Complex64>::identity(n, n);
    let mut v = DVector::<Complex64>::zeros(n);

    for (src, sink) in &net.wiring {
        let row = net.index(*sink);
        match src {
            Source::External => v[row] = Complex64::new(1.0, 0.0),
            Source::Output(p) => {
                let el = &net.elements[p.element];
                for inp in 0..el.ports() {
                    let col = net.offsets[p.element] + inp;
                    a[(row, col)] -= el.response(p.port, inp, omega);
                }
            }
        }
    }

    let inverse = a.clone().try_inverse().ok_or(Error::SingularLoop { omega })?;
    let rcond = 1.0 / (norm_1(&a) * norm_1(&inverse));
    if !(rcond >= SINGULAR_RCOND) {
        return Err(Error::SingularLoop { omega });
    }
    let x = inverse * v;

    let cav = match &net.elements[net.tap] {
        Element::OptoCavity(c) => c,
        _ => unreachable!("tap validated at construction"),
    };
    Ok(chi(cav, omega) * x[net.index(Port::new(net.tap, 0))])
}

fn norm_1(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
