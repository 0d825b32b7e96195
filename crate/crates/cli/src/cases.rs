//! The built-in case table and its evaluation to verdicts.

use std::collections::BTreeMap;

use liesym_core::expr::{Expr, FuncSymbol, MultiIndex};
use liesym_core::lie::{
    check_symmetry, closure_table, commutator, determining_equations, xi_name, VectorField, ETA_NAME,
};
use liesym_core::ode::Method;
use liesym_core::reduction::{
    check_first_integral, compare_reduced, pullback, solve_linear, verify_closed_form, ReductionError,
    Verdict as Compared,
};
use rayon::prelude::*;

use crate::model::{Model, ModelError};
use crate::numeric;
use crate::report::{CaseResult, Report, Verdict};

/// `Σ coefficient * field`; fields may carry `[f := body]` to specialise an
/// opaque function.
pub type Combo = &'static [(&'static str, &'static str)];
type Pins = &'static [(usize, usize, &'static [&'static str])];

#[derive(Clone, Debug)]
pub enum Check {
    Symmetry {
        field: &'static str,
        pde: &'static str,
    },
    /// A printed generator that is not a symmetry, next to the corrected one.
    PrintedSymmetry {
        printed: &'static str,
        corrected: &'static str,
        pde: &'static str,
        note: &'static str,
    },
    NonSymmetry {
        field: &'static str,
        pde: &'static str,
        residual: &'static str,
    },
    Commutator {
        a: &'static str,
        b: &'static str,
        printed: Combo,
        /// Only given when the printed form is expected to differ.
        derived: Option<Combo>,
        note: &'static str,
    },
    Closure {
        fields: &'static [&'static str],
        pins: Pins,
        witness: Option<(usize, usize)>,
    },
    Determining {
        pde: &'static str,
        generic: &'static str,
    },
    Reduction {
        pde: &'static str,
        ansatz: &'static str,
        derived: &'static str,
        printed: Option<&'static str>,
        subst: &'static [(&'static str, &'static str)],
        note: &'static str,
    },
    /// A printed ansatz whose pullback keeps old variables.
    RejectedAnsatz {
        pde: &'static str,
        ansatz: &'static str,
        corrected: &'static str,
        note: &'static str,
    },
    UnsupportedAnsatz {
        ansatz: &'static str,
        note: &'static str,
    },
    Chain {
        pde: &'static str,
        first: &'static str,
        second: &'static str,
        direct: &'static str,
        derived: &'static str,
    },
    FirstIntegral {
        eq: &'static str,
        candidate: &'static str,
        /// Pinned nonzero residual of a printed pair.
        golden: Option<&'static str>,
        note: &'static str,
    },
    ClosedForm {
        eq: &'static str,
        solution: &'static str,
        expect: Expect,
    },
    Profile {
        run: &'static str,
        /// `(zeta, H, H')`, H' unchecked when NaN.
        pinned: &'static [(f64, f64, f64)],
    },
    Rk4Order,
}

#[derive(Clone, Debug)]
pub enum Expect {
    Certified,
    Residual(&'static str),
    /// The residual fixes `unknown`; `printed` marks a printed family.
    Amplitude {
        unknown: &'static str,
        value: &'static str,
        printed: Option<&'static str>,
    },
}

#[derive(Clone, Debug)]
pub struct Case {
    pub label: &'static str,
    pub topic: &'static str,
    pub check: Check,
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Symmetry { .. } | Check::PrintedSymmetry { .. } | Check::NonSymmetry { .. } => "symmetry",
            Check::Commutator { .. } => "commutator",
            Check::Closure { .. } => "closure",
            Check::Determining { .. } => "determining",
            Check::Reduction { .. } | Check::RejectedAnsatz { .. } | Check::UnsupportedAnsatz { .. } => "reduction",
            Check::Chain { .. } => "chain",
            Check::FirstIntegral { .. } => "first-integral",
            Check::ClosedForm { .. } => "closed-form",
            Check::Profile { .. } | Check::Rk4Order => "numeric",
        }
    }
}

/// Absolute tolerance between adaptive and fixed-step profile endpoints.
pub const CROSS_METHOD_TOL: f64 = 1e-6;
/// Absolute tolerance on pinned profile values.
pub const PINNED_TOL: f64 = 1e-6;
/// Step of the fixed-step reference integration.
pub const RK4_STEP: f64 = 1e-4;
/// Accepted range of the RK4 error ratio under step halving.
pub const RK4_RATIO: (f64, f64) = (12.0, 20.0);

fn sym(label: &'static str, topic: &'static str, field: &'static str, pde: &'static str) -> Case {
    Case {
        label,
        topic,
        check: Check::Symmetry { field, pde },
    }
}

fn com(label: &'static str, topic: &'static str, a: &'static str, b: &'static str, printed: Combo) -> Case {
    Case {
        label,
        topic,
        check: Check::Commutator {
            a,
            b,
            printed,
            derived: None,
            note: "",
        },
    }
}

fn com_fix(
    label: &'static str,
    topic: &'static str,
    a: &'static str,
    b: &'static str,
    printed: Combo,
    derived: Combo,
    note: &'static str,
) -> Case {
    Case {
        label,
        topic,
        check: Check::Commutator {
            a,
            b,
            printed,
            derived: Some(derived),
            note,
        },
    }
}

fn fi(label: &'static str, topic: &'static str, eq: &'static str, candidate: &'static str) -> Case {
    Case {
        label,
        topic,
        check: Check::FirstIntegral {
            eq,
            candidate,
            golden: None,
            note: "",
        },
    }
}

const T1: &str = "time-translation";
const S1: &str = "cc-scaling";
const DX: &str = "x-translation";
const DY: &str = "y-translation";
const S2: &str = "gcc-scaling-drift";
const GAL: &str = "gcc-galilean";

const TABLE_NOTE: &str = "printed cell disagrees with [row, column] = row*column - column*row";
const FUNCTION_NOTE: &str = "printed function argument has the opposite sign or a wrong coefficient";
const EXP_NOTE: &str = "printed right-hand side is not the commutator of the listed generators";

/// Every built-in case.
pub fn all() -> Vec<Case> {
    let mut v = vec![
        // point symmetries of the constant-depth equation
        sym("symmetry/cc/time-translation", "cc-point-generators", T1, "cc"),
        sym("symmetry/cc/scaling", "cc-point-generators", S1, "cc"),
        Case {
            label: "symmetry/cc/vertical-shift-rejected",
            topic: "cc-point-generators",
            check: Check::NonSymmetry {
                field: "du-field",
                pde: "cc",
                residual: "-D(u;x,x)",
            },
        },
        sym("symmetry/cc/x-shift-phi", "cc-function-generators", "x-shift-phi", "cc"),
        sym("symmetry/cc/y-shift-psi", "cc-function-generators", "y-shift-psi", "cc"),
        sym("symmetry/cc/x-translation", "cc-constant-subalgebra", DX, "cc"),
        sym("symmetry/cc/y-translation", "cc-constant-subalgebra", DY, "cc"),
        sym("symmetry/cc/x-shift-exp", "cc-exponential-generators", "x-shift-exp", "cc"),
        sym("symmetry/cc/y-shift-exp", "cc-exponential-generators", "y-shift-exp", "cc"),
        Case {
            label: "symmetry/cc/y-shift-exp-printed",
            topic: "cc-exponential-generators",
            check: Check::PrintedSymmetry {
                printed: "y-shift-exp-printed",
                corrected: "y-shift-exp",
                pde: "cc",
                note: "printed prefactor uses omega1 where the stated psi gives omega2",
            },
        },
        sym("symmetry/cc/linear-y-shift", "cc-five-field-algebra", "linear-y-shift", "cc"),
        // power-law equation
        sym("symmetry/gcc-no-drift/time-translation", "gcc-generators", T1, "gcc-no-drift"),
        sym("symmetry/gcc-no-drift/scaling", "gcc-generators", "gcc-scaling", "gcc-no-drift"),
        sym("symmetry/gcc-no-drift/x-translation", "gcc-generators", DX, "gcc-no-drift"),
        sym("symmetry/gcc-no-drift/y-translation", "gcc-generators", DY, "gcc-no-drift"),
        sym("symmetry/gcc-no-drift/galilean", "gcc-generators", GAL, "gcc-no-drift"),
        sym("symmetry/gcc/time-translation", "gcc-generators", T1, "gcc"),
        sym("symmetry/gcc/scaling-with-drift", "gcc-generators", S2, "gcc"),
        sym("symmetry/gcc/x-translation", "gcc-generators", DX, "gcc"),
        sym("symmetry/gcc/y-translation", "gcc-generators", DY, "gcc"),
        sym("symmetry/gcc/galilean", "gcc-generators", GAL, "gcc"),
        // reduced equations in (t, w)
        sym("symmetry/cc-reduced/time-translation", "reduced-generators", "reduced-time-translation", "cc-reduced-printed"),
        sym("symmetry/cc-reduced/scaling", "reduced-generators", "reduced-scaling", "cc-reduced-printed"),
        sym("symmetry/cc-reduced/projective", "reduced-generators", "reduced-projective", "cc-reduced-printed"),
        sym("symmetry/cc-reduced/w-shift-phi", "reduced-generators", "reduced-w-shift-phi", "cc-reduced-printed"),
        sym("symmetry/gcc-reduced/time-translation", "gcc-reduced-generators", "reduced-time-translation", "gcc-reduced-printed"),
        sym("symmetry/gcc-reduced/w-translation", "gcc-reduced-generators", "reduced-w-translation", "gcc-reduced-printed"),
        sym("symmetry/gcc-reduced/power-scaling", "gcc-reduced-generators", "reduced-power-scaling", "gcc-reduced-printed"),
        Case {
            label: "symmetry/gcc-reduced/power-scaling-printed",
            topic: "gcc-reduced-generators",
            check: Check::PrintedSymmetry {
                printed: "reduced-power-scaling-printed",
                corrected: "reduced-power-scaling",
                pde: "gcc-reduced-printed",
                note: "printed w-component t(1 + alpha) - w; the reduced equation admits w + (1 - alpha)t",
            },
        },
        // relations with opaque functions
        com("commutator/cc-functions/time-translation,scaling", "cc-function-generators", T1, S1, &[("2", T1)]),
        com(
            "commutator/cc-functions/time-translation,x-shift-phi",
            "cc-function-generators",
            T1,
            "x-shift-phi",
            &[("1", "x-shift-phi[phi := D(phi;t)]")],
        ),
        com(
            "commutator/cc-functions/time-translation,y-shift-psi",
            "cc-function-generators",
            T1,
            "y-shift-psi",
            &[("1", "y-shift-psi[psi := D(psi;t)]")],
        ),
        com_fix(
            "commutator/cc-functions/scaling,x-shift-phi",
            "cc-function-generators",
            S1,
            "x-shift-phi",
            &[("1", "x-shift-phi[phi := phi(t) - 2*t*D(phi;t)]")],
            &[("1", "x-shift-phi[phi := 2*t*D(phi;t) - phi(t)]")],
            FUNCTION_NOTE,
        ),
        com_fix(
            "commutator/cc-functions/scaling,y-shift-psi",
            "cc-function-generators",
            S1,
            "y-shift-psi",
            &[("1", "y-shift-psi[psi := 3/4*psi(t) - 2*t*D(psi;t)]")],
            &[("1", "y-shift-psi[psi := 2*t*D(psi;t) - 3/2*psi(t)]")],
            FUNCTION_NOTE,
        ),
        com("commutator/cc-functions/x-shift-phi,y-shift-psi", "cc-function-generators", "x-shift-phi", "y-shift-psi", &[]),
        com(
            "commutator/cc-functions/x-shift-phi,x-shift-chi",
            "cc-function-generators",
            "x-shift-phi",
            "x-shift-phi[phi := chi(t)]",
            &[],
        ),
        com(
            "commutator/cc-functions/y-shift-psi,y-shift-chi",
            "cc-function-generators",
            "y-shift-psi",
            "y-shift-psi[psi := chi(t)]",
            &[("1/2", "x-shift-phi[phi := chi(t)*D(psi;t) - psi(t)*D(chi;t)]")],
        ),
        // relations of the constant subalgebra as listed in the text
        com("commutator/cc-constant/time-translation,scaling", "cc-constant-subalgebra", T1, S1, &[("2", T1)]),
        com("commutator/cc-constant/time-translation,x-translation", "cc-constant-subalgebra", T1, DX, &[]),
        com("commutator/cc-constant/time-translation,y-translation", "cc-constant-subalgebra", T1, DY, &[]),
        com_fix(
            "commutator/cc-constant/scaling,x-translation",
            "cc-constant-subalgebra",
            S1,
            DX,
            &[("1", DX)],
            &[("-1", DX)],
            TABLE_NOTE,
        ),
        com_fix(
            "commutator/cc-constant/scaling,y-translation",
            "cc-constant-subalgebra",
            S1,
            DY,
            &[("3/2", DX)],
            &[("-3/2", DY)],
            TABLE_NOTE,
        ),
        com("commutator/cc-constant/x-translation,y-translation", "cc-constant-subalgebra", DX, DY, &[]),
        // exponential generators, computed with the corrected y-shift
        com(
            "commutator/cc-exponential/time-translation,x-shift-exp",
            "cc-exponential-generators",
            T1,
            "x-shift-exp",
            &[("omega1", "x-shift-exp")],
        ),
        com_fix(
            "commutator/cc-exponential/time-translation,y-shift-exp-printed",
            "cc-exponential-generators",
            T1,
            "y-shift-exp-printed",
            &[("omega2", "y-shift-exp-printed")],
            &[("omega1", "y-shift-exp-printed")],
            "the printed generator carries exp(omega1*t), so the bracket scales by omega1",
        ),
        com(
            "commutator/cc-exponential/time-translation,y-shift-exp",
            "cc-exponential-generators",
            T1,
            "y-shift-exp",
            &[("omega2", "y-shift-exp")],
        ),
        com_fix(
            "commutator/cc-exponential/scaling,x-shift-exp",
            "cc-exponential-generators",
            S1,
            "x-shift-exp",
            &[("1", "scaling-x-exp-printed")],
            &[("1", "x-shift-phi[phi := exp(omega1*t)*(2*omega1*t - 1)]")],
            EXP_NOTE,
        ),
        com_fix(
            "commutator/cc-exponential/scaling,y-shift-exp",
            "cc-exponential-generators",
            S1,
            "y-shift-exp",
            &[("1", "scaling-y-exp-printed")],
            &[("1", "y-shift-psi[psi := exp(omega2*t)*(2*omega2*t - 3/2)]")],
            EXP_NOTE,
        ),
        com("commutator/cc-exponential/x-translation,x-shift-exp", "cc-exponential-generators", DX, "x-shift-exp", &[]),
        com("commutator/cc-exponential/x-translation,y-shift-exp", "cc-exponential-generators", DX, "y-shift-exp", &[]),
        com_fix(
            "commutator/cc-exponential/y-translation,y-shift-exp",
            "cc-exponential-generators",
            DY,
            "y-shift-exp",
            &[("1", "y-x-exp-printed")],
            &[("1", "x-shift-phi[phi := -1/2*omega2*exp(omega2*t)]")],
            EXP_NOTE,
        ),
        // algebras
        Case {
            label: "closure/cc/five-field-algebra",
            topic: "cc-five-field-algebra",
            check: Check::Closure {
                fields: &[T1, S1, DX, DY, "linear-y-shift"],
                pins: &[(0, 1, &["2", "0", "0", "0", "0"]), (0, 4, &["0", "0", "0", "1", "0"]), (1, 4, &["0", "0", "0", "0", "1/2"])],
                witness: None,
            },
        },
        Case {
            label: "closure/cc/constant-subalgebra",
            topic: "cc-commutator-table",
            check: Check::Closure {
                fields: &[T1, S1, DX, DY],
                pins: &[(1, 2, &["0", "0", "-1", "0"]), (1, 3, &["0", "0", "0", "-3/2"])],
                witness: None,
            },
        },
        Case {
            label: "closure/cc/six-field-set",
            topic: "cc-exponential-generators",
            check: Check::Closure {
                fields: &[T1, S1, DX, DY, "x-shift-exp", "y-shift-exp"],
                pins: &[],
                witness: Some((1, 4)),
            },
        },
        Case {
            label: "closure/gcc/five-field-algebra",
            topic: "gcc-commutator-table",
            check: Check::Closure {
                fields: &[T1, S2, DX, DY, GAL],
                pins: &[(0, 1, &["2", "0", "alpha", "0", "0"]), (0, 4, &["0", "0", "0", "2", "0"]), (1, 4, &["0", "0", "0", "0", "1/2"])],
                witness: None,
            },
        },
        Case {
            label: "closure/gcc-no-drift/five-field-algebra",
            topic: "gcc-commutator-table",
            check: Check::Closure {
                fields: &[T1, "gcc-scaling", DX, DY, GAL],
                pins: &[(0, 1, &["2", "0", "0", "0", "0"])],
                witness: None,
            },
        },
        Case {
            label: "determining/cc/generic-generator",
            topic: "cc-determining-equations",
            check: Check::Determining {
                pde: "cc",
                generic: "generic-cc-generator",
            },
        },
        // reductions
        Case {
            label: "reduction/cc/travelling",
            topic: "cc-reduced-equation",
            check: Check::Reduction {
                pde: "cc",
                ansatz: "cc-travelling",
                derived: "cc-reduced-derived",
                printed: Some("cc-reduced-printed"),
                subst: &[("h0", "alpha")],
                note: "the printed reduced equation writes h0 where the pullback gives alpha",
            },
        },
        Case {
            label: "reduction/cc/travelling-from-generator",
            topic: "cc-travelling-invariants",
            check: Check::Reduction {
                pde: "cc",
                ansatz: "cc-travelling-from-generator",
                derived: "cc-reduced-derived",
                printed: None,
                subst: &[],
                note: "",
            },
        },
        Case {
            label: "reduction/cc/chained-wave",
            topic: "wave-ode",
            check: Check::Chain {
                pde: "cc",
                first: "cc-travelling",
                second: "reduced-wave",
                direct: "direct-wave",
                derived: "chained-wave-derived",
            },
        },
        Case {
            label: "reduction/cc-reduced/stationary",
            topic: "wave-ode",
            check: Check::Reduction {
                pde: "cc-reduced-printed",
                ansatz: "reduced-stationary",
                derived: "stationary-derived",
                printed: Some("stationary-printed"),
                subst: &[],
                note: "sign of Y*Y'' differs; the printed integral differentiates to the derived form",
            },
        },
        Case {
            label: "reduction/cc-reduced/scaling",
            topic: "scaling-ode",
            check: Check::Reduction {
                pde: "cc-reduced-printed",
                ansatz: "reduced-scaling",
                derived: "scaling-derived",
                printed: Some("scaling-printed"),
                subst: &[],
                note: "printed third-order equation is not the pullback; its printed second integral is",
            },
        },
        Case {
            label: "reduction/cc-reduced/projective",
            topic: "projective-solution",
            check: Check::Reduction {
                pde: "cc-reduced-printed",
                ansatz: "reduced-projective",
                derived: "projective-derived",
                printed: None,
                subst: &[],
                note: "",
            },
        },
        Case {
            label: "reduction/cc-reduced/projective-from-generator",
            topic: "projective-solution",
            check: Check::UnsupportedAnsatz {
                ansatz: "reduced-projective-from-generator",
                note: "invariants of a quadratic generator are outside the affine invariant solver",
            },
        },
        Case {
            label: "reduction/gcc/travelling",
            topic: "gcc-reduced-equation",
            check: Check::Reduction {
                pde: "gcc",
                ansatz: "gcc-travelling",
                derived: "gcc-reduced-derived",
                printed: Some("gcc-reduced-printed"),
                subst: &[("beta", "1")],
                note: "signs of the nonlinear terms and of alpha differ from the pullback",
            },
        },
        Case {
            label: "reduction/gcc-reduced/wave",
            topic: "gcc-wave-ode",
            check: Check::Reduction {
                pde: "gcc-reduced-printed",
                ansatz: "power-wave",
                derived: "power-wave-derived",
                printed: Some("power-wave-printed"),
                subst: &[],
                note: "printed coefficient Y^n - alpha - 2; the pullback gives Y^n - alpha",
            },
        },
        Case {
            label: "reduction/gcc-reduced/scaling",
            topic: "gcc-scaling-ode",
            check: Check::Reduction {
                pde: "gcc-reduced-printed",
                ansatz: "power-scaling",
                derived: "power-scaling-derived",
                printed: Some("power-scaling-printed"),
                subst: &[],
                note: "",
            },
        },
        Case {
            label: "reduction/gcc-reduced/scaling-printed-invariant",
            topic: "gcc-scaling-invariants",
            check: Check::RejectedAnsatz {
                pde: "gcc-reduced-printed",
                ansatz: "power-scaling-printed",
                corrected: "power-scaling",
                note: "printed similarity variable (w + t(1 + alpha))/sqrt(t) is not invariant; (w - (1 - alpha)t)/sqrt(t) is",
            },
        },
        // first integrals
        fi("first-integral/stationary/derived", "wave-first-integral", "stationary-derived", "stationary-integral"),
        Case {
            label: "first-integral/stationary/printed",
            topic: "wave-first-integral",
            check: Check::FirstIntegral {
                eq: "stationary-printed",
                candidate: "stationary-integral",
                golden: Some("-2*Y0*Y - 2*Y^2*D(Y;w)"),
                note: "the printed integral belongs to the equation with +Y*Y''",
            },
        },
        fi("first-integral/stationary/second", "wave-second-integral", "stationary-integral", "stationary-second-integral"),
        fi("first-integral/scaling/derived", "scaling-first-integral", "scaling-derived", "scaling-integral-derived"),
        fi(
            "first-integral/scaling/derived-second",
            "scaling-second-integral",
            "scaling-integral-derived",
            "scaling-second-integral-derived",
        ),
        fi(
            "first-integral/scaling/printed-second-of-derived",
            "scaling-second-integral",
            "scaling-derived",
            "scaling-second-integral-printed",
        ),
        Case {
            label: "first-integral/scaling/printed",
            topic: "scaling-first-integral",
            check: Check::FirstIntegral {
                eq: "scaling-printed",
                candidate: "scaling-integral-printed",
                golden: Some(
                    "1/2*sigma*Y0 - 3/2*sigma*Y - 2*sigma*Y^2 + sigma*D(Y;sigma) + 1/2*sigma^2*Y - Y0 - Y0*Y + 4*Y - 4*Y*D(Y;sigma) + 3*Y^2 + 2*Y^3 - D(Y;sigma)",
                ),
                note: "the printed third-order equation has no first integral of the printed form",
            },
        },
        Case {
            label: "first-integral/scaling/printed-pair",
            topic: "scaling-second-integral",
            check: Check::FirstIntegral {
                eq: "scaling-integral-printed",
                candidate: "scaling-second-integral-printed",
                golden: Some(
                    "-sigma*Y0*Y + 1/2*sigma*Y1 - sigma*Y + 3/2*sigma*Y^2 + 1/2*sigma^2*Y0 - 1/2*sigma^2*Y - Y1*Y + 2*Y^2 - Y^3",
                ),
                note: "the printed first integral reads (2Y - sigma)Y where the printed second integral differentiates to (2Y - sigma)Y'",
            },
        },
        fi("first-integral/projective/riccati", "projective-riccati", "projective-derived", "projective-riccati"),
        Case {
            label: "first-integral/gcc-wave/printed",
            topic: "gcc-wave-integral",
            check: Check::FirstIntegral {
                eq: "power-wave-printed",
                candidate: "power-wave-integral-printed",
                golden: Some(
                    "(n + 1)*(A + alpha + 4)*D(Y;sigma,sigma)",
                ),
                note: "the printed quadrature uses an undefined constant A; it integrates the printed equation only for A = -alpha - 4",
            },
        },
        fi(
            "first-integral/gcc-wave/derived",
            "gcc-wave-integral",
            "power-wave-derived",
            "power-wave-integral-derived",
        ),
        Case {
            label: "first-integral/gcc-scaling/printed-grouping",
            topic: "gcc-scaling-integral",
            check: Check::FirstIntegral {
                eq: "power-scaling-printed",
                candidate: "profile-printed-grouping",
                golden: Some(
                    "-1/2*zeta*H1 + 1/2*zeta*H1*H + 1/4*zeta*n^(-1)*H - 1/4*zeta*n^(-1)*H^2 - 1/2*zeta*H^n*D(H;zeta) + 1/2*zeta*H^(n + 1)*D(H;zeta) - 1/2*zeta*D(H;zeta)^2 + 1/4*zeta^2*H*D(H;zeta) - 1/4*zeta^2*H^2*D(H;zeta) - 1/2*H*D(H;zeta) + 1/2*D(H;zeta)",
                ),
                note: "with the bracket read as (H^n - zeta/2 H)H' the quadrature does not integrate the scaling equation",
            },
        },
        Case {
            label: "first-integral/gcc-scaling/alternative-grouping",
            topic: "gcc-scaling-integral",
            check: Check::FirstIntegral {
                eq: "power-scaling-printed",
                candidate: "profile-alternative-grouping",
                golden: Some(
                    "-1/2*zeta*H1 + 1/2*zeta*H1*H + 1/4*zeta*n^(-1)*H - 1/4*zeta*n^(-1)*H^2 - zeta*H^(n + 1)*D(H;zeta) + zeta*H^(n + 2)*D(H;zeta) - 1/2*zeta*D(H;zeta)^2 + 1/4*zeta^2*H*D(H;zeta) - 1/4*zeta^2*H^2*D(H;zeta) + H1*H^n - H1*H^(n + 1) - 1/2*n^(-1)*H^(n + 1) + 1/2*n^(-1)*H^(n + 2) - n*H^(n - 1)*D(H;zeta)^2 + n*H^n*D(H;zeta)^2 + H^n*D(H;zeta)^2 - 1/2*H*D(H;zeta) + H^(2*n + 1)*D(H;zeta) - H^(2*n + 2)*D(H;zeta) + 1/2*D(H;zeta)",
                ),
                note: "with the bracket read as (H^n - zeta/2)H H' the quadrature does not integrate the scaling equation",
            },
        },
        fi(
            "first-integral/gcc-scaling/integral-grouping",
            "gcc-scaling-integral",
            "power-scaling-printed",
            "profile-integral-grouping",
        ),
        // closed forms
        Case {
            label: "closed-form/cc-reduced/linear-in-w",
            topic: "reduced-linear-solution",
            check: Check::ClosedForm {
                eq: "cc-reduced-printed",
                solution: "linear-in-w",
                expect: Expect::Certified,
            },
        },
        Case {
            label: "closed-form/cc-reduced/linear-in-w-needs-side-condition",
            topic: "reduced-linear-solution",
            check: Check::ClosedForm {
                eq: "cc-reduced-printed",
                solution: "linear-in-w-unconstrained",
                expect: Expect::Residual("phi(t)^(-1)*D(phi;t,t)"),
            },
        },
        Case {
            label: "closed-form/cc-reduced/linear-in-w-reciprocal",
            topic: "reduced-linear-solution",
            check: Check::ClosedForm {
                eq: "cc-reduced-printed",
                solution: "linear-in-w-reciprocal",
                expect: Expect::Certified,
            },
        },
        Case {
            label: "closed-form/stationary/tanh-amplitude",
            topic: "wave-tanh-solution",
            check: Check::ClosedForm {
                eq: "stationary-homogeneous",
                solution: "tanh-free-amplitude",
                expect: Expect::Amplitude {
                    unknown: "A",
                    value: "c^(-1)",
                    printed: None,
                },
            },
        },
        Case {
            label: "closed-form/stationary/tanh-fixed-amplitude",
            topic: "wave-tanh-solution",
            check: Check::ClosedForm {
                eq: "stationary-homogeneous",
                solution: "tanh-fixed-amplitude",
                expect: Expect::Certified,
            },
        },
        Case {
            label: "closed-form/stationary/tanh-printed-amplitude",
            topic: "wave-tanh-solution",
            check: Check::ClosedForm {
                eq: "stationary-homogeneous",
                solution: "tanh-printed-amplitude",
                expect: Expect::Amplitude {
                    unknown: "Y0",
                    value: "c^(-1)",
                    printed: Some("the printed amplitude reuses the integration constant Y0, which is zero here; the amplitude is forced to 1/c"),
                },
            },
        },
        Case {
            label: "closed-form/cc/constant-state",
            topic: "cc-point-generators",
            check: Check::ClosedForm {
                eq: "cc",
                solution: "constant-state",
                expect: Expect::Certified,
            },
        },
        // numerics
        Case {
            label: "numeric/profile/n2",
            topic: "profile-figure",
            check: Check::Profile {
                run: "profile-n2",
                pinned: &[(1.0, 0.72601533, -0.12931863), (10.0, 5.4985895, 0.49825706)],
            },
        },
        Case {
            label: "numeric/profile/n3",
            topic: "profile-figure",
            check: Check::Profile {
                run: "profile-n3",
                pinned: &[(10.0, -0.52719152, f64::NAN)],
            },
        },
        Case {
            label: "numeric/profile/n5",
            topic: "profile-figure",
            check: Check::Profile {
                run: "profile-n5",
                pinned: &[(10.0, -0.84981667, f64::NAN)],
            },
        },
        Case {
            label: "numeric/rk4-order",
            topic: "profile-figure",
            check: Check::Rk4Order,
        },
    ];
    v.extend(table_cases());
    v
}

const TABLE1: [&str; 4] = [T1, S1, DX, DY];
const TABLE2: [&str; 5] = [T1, S2, DX, DY, GAL];

/// Cells of the two printed commutator tables.
fn table_cases() -> Vec<Case> {
    type Cell = (Combo, Option<Combo>);
    const Z: Cell = (&[], None);
    let t1: [[Cell; 4]; 4] = [
        [Z, (&[("2", T1)], None), Z, Z],
        [
            (&[("2", T1)], Some(&[("-2", T1)])),
            Z,
            (&[("1", DX)], Some(&[("-1", DX)])),
            (&[("3/2", DX)], Some(&[("-3/2", DY)])),
        ],
        [Z, (&[("-1", DX)], Some(&[("1", DX)])), Z, Z],
        [Z, (&[("-3/2", DX)], Some(&[("3/2", DY)])), Z, Z],
    ];
    let t2: [[Cell; 5]; 5] = [
        [Z, (&[("2", T1), ("alpha", DX)], None), Z, Z, (&[("2", DY)], None)],
        [
            (&[("-2", T1), ("-alpha", DX)], None),
            Z,
            (&[("-1", DX)], None),
            (&[("-3/2", DY)], None),
            (&[("1/2", GAL)], None),
        ],
        [Z, (&[("1", DX)], None), Z, Z, Z],
        [Z, (&[("3/2", DY)], None), Z, Z, (&[("-1", DX)], None)],
        [
            (&[("-2", DY)], None),
            (&[("-1/2", GAL)], None),
            Z,
            (&[("1", DX)], None),
            Z,
        ],
    ];
    let mut out = Vec::new();
    let mut push = |topic: &'static str, prefix: &str, a: &'static str, b: &'static str, (printed, derived): Cell| {
        let label: &'static str = Box::leak(format!("commutator/{prefix}/{a},{b}").into_boxed_str());
        out.push(Case {
            label,
            topic,
            check: Check::Commutator {
                a,
                b,
                printed,
                derived,
                note: if derived.is_some() { TABLE_NOTE } else { "" },
            },
        });
    };
    for (i, row) in t1.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            push("cc-commutator-table", "cc-table", TABLE1[i], TABLE1[j], cell);
        }
    }
    for (i, row) in t2.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            push("gcc-commutator-table", "gcc-table", TABLE2[i], TABLE2[j], cell);
        }
    }
    out
}

/// Descriptive topics that the built-in library must cover.
pub const TOPICS: &[&str] = &[
    "cc-point-generators",
    "cc-function-generators",
    "cc-constant-subalgebra",
    "cc-exponential-generators",
    "cc-five-field-algebra",
    "cc-commutator-table",
    "cc-determining-equations",
    "gcc-generators",
    "gcc-commutator-table",
    "cc-travelling-invariants",
    "cc-reduced-equation",
    "reduced-generators",
    "reduced-linear-solution",
    "wave-ode",
    "wave-first-integral",
    "wave-tanh-solution",
    "wave-second-integral",
    "scaling-ode",
    "scaling-first-integral",
    "scaling-second-integral",
    "projective-solution",
    "projective-riccati",
    "gcc-reduced-equation",
    "gcc-reduced-generators",
    "gcc-wave-ode",
    "gcc-wave-integral",
    "gcc-scaling-invariants",
    "gcc-scaling-ode",
    "gcc-scaling-integral",
    "profile-figure",
];

type Outcome = Result<CaseResult, String>;

fn e2s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// A field by name, optionally specialised as `name[f := body]`.
pub fn field_spec(model: &Model, spec: &str) -> Result<VectorField, String> {
    let Some((name, rest)) = spec.split_once('[') else {
        return model.field(spec).cloned().map_err(e2s);
    };
    let inner = rest
        .strip_suffix(']')
        .ok_or_else(|| format!("unterminated `[` in `{spec}`"))?;
    let (f, body) = inner
        .split_once(":=")
        .ok_or_else(|| format!("expected `f := body` in `{spec}`"))?;
    let body = model.scope.parse(body.trim()).map_err(e2s)?;
    model
        .field(name)
        .map_err(e2s)?
        .substitute_function(f.trim(), &body)
        .map_err(e2s)
}

fn combo(model: &Model, parts: Combo, like: &VectorField) -> Result<VectorField, String> {
    let mut acc = VectorField::zero("combination", like.dependent());
    for (c, spec) in parts {
        let c = model.scope.parse(c).map_err(e2s)?;
        acc = acc.add(&field_spec(model, spec)?.scale(&c)).map_err(e2s)?;
    }
    Ok(acc)
}

fn combo_text(parts: Combo) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    parts
        .iter()
        .map(|(c, f)| format!("({c})*{f}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Evaluates one case; internal errors become a failing verdict.
pub fn evaluate(model: &Model, case: &Case) -> CaseResult {
    let base = CaseResult::new(case.label, case.topic, case.check.kind());
    match run_check(model, case, base.clone()) {
        Ok(r) => r,
        Err(e) => base.verdict(Verdict::Fail, format!("error: {e}")),
    }
}

fn run_check(model: &Model, case: &Case, r: CaseResult) -> Outcome {
    match &case.check {
        Check::Symmetry { field, pde } => {
            let residual =
                check_symmetry(model.field(field).map_err(e2s)?, model.pde(pde).map_err(e2s)?).map_err(e2s)?;
            let r = r
                .detail("field", field)
                .detail("pde", pde)
                .detail("residual", &residual);
            Ok(if residual.is_zero() {
                r.verdict(Verdict::Pass, "residual is zero")
            } else {
                r.verdict(Verdict::Fail, "nonzero residual")
            })
        }
        Check::PrintedSymmetry {
            printed,
            corrected,
            pde,
            note,
        } => {
            let p = model.pde(pde).map_err(e2s)?;
            let rp = check_symmetry(model.field(printed).map_err(e2s)?, p).map_err(e2s)?;
            let rc = check_symmetry(model.field(corrected).map_err(e2s)?, p).map_err(e2s)?;
            let r = r
                .detail("field", printed)
                .detail("pde", pde)
                .detail("residual", &rp)
                .detail("corrected", corrected)
                .detail("corrected-residual", &rc);
            Ok(match (rp.is_zero(), rc.is_zero()) {
                (true, _) => r.verdict(Verdict::Pass, "residual is zero"),
                (false, true) => r
                    .verdict(
                        Verdict::MismatchRecorded,
                        format!("printed generator is not a symmetry; `{corrected}` is"),
                    )
                    .record(
                        model.field(printed).map_err(e2s)?,
                        model.field(corrected).map_err(e2s)?,
                        &rp,
                        note,
                    ),
                (false, false) => r.verdict(
                    Verdict::Fail,
                    "neither the printed nor the corrected generator is a symmetry",
                ),
            })
        }
        Check::NonSymmetry { field, pde, residual } => {
            let got = check_symmetry(model.field(field).map_err(e2s)?, model.pde(pde).map_err(e2s)?).map_err(e2s)?;
            let want = model.scope.parse(residual).map_err(e2s)?;
            let r = r.detail("field", field).detail("pde", pde).detail("residual", &got);
            Ok(if !got.is_zero() && got == want {
                r.verdict(Verdict::Pass, "not a symmetry, with the expected residual")
            } else {
                r.verdict(Verdict::Fail, format!("expected residual {want}"))
            })
        }
        Check::Commutator {
            a,
            b,
            printed,
            derived,
            note,
        } => {
            let (fa, fb) = (field_spec(model, a)?, field_spec(model, b)?);
            let c = commutator(&fa, &fb).map_err(e2s)?;
            let p = combo(model, printed, &fa)?;
            let r = r.detail("commutator", &c).detail("printed", combo_text(printed));
            if c.sub(&p).map_err(e2s)?.is_zero() {
                return Ok(r.verdict(Verdict::Pass, "commutator equals the listed combination"));
            }
            let residual = c.sub(&p).map_err(e2s)?;
            let Some(derived) = derived else {
                return Ok(r
                    .detail("residual", &residual)
                    .verdict(Verdict::Fail, "commutator differs from the listed combination"));
            };
            let d = combo(model, derived, &fa)?;
            let r = r.detail("derived", combo_text(derived)).detail("residual", &residual);
            Ok(if c.sub(&d).map_err(e2s)?.is_zero() {
                r.verdict(
                    Verdict::MismatchRecorded,
                    "printed combination differs; derived combination matches",
                )
                .record(combo_text(printed), combo_text(derived), &residual, note)
            } else {
                r.verdict(
                    Verdict::Fail,
                    "commutator matches neither the printed nor the derived combination",
                )
            })
        }
        Check::Closure { fields, pins, witness } => {
            let basis: Vec<VectorField> = fields
                .iter()
                .map(|f| model.field(f).cloned().map_err(e2s))
                .collect::<Result<_, _>>()?;
            let report = closure_table(&basis).map_err(e2s)?;
            let mut r = r
                .detail("fields", fields.join(", "))
                .detail("closed", report.is_closed())
                .detail("witnesses", format!("{:?}", report.witnesses));
            if let Some(w) = witness {
                return Ok(if !report.is_closed() && report.witnesses.contains(w) {
                    let (i, j) = *w;
                    r.detail("witness", &report.commutators[i][j]).verdict(
                        Verdict::Pass,
                        format!("not closed; [{}, {}] is a witness", fields[i], fields[j]),
                    )
                } else {
                    r.verdict(Verdict::Fail, format!("expected witness {w:?}"))
                });
            }
            if !report.is_closed() {
                return Ok(r.verdict(Verdict::Fail, "expected a closed algebra"));
            }
            for (i, j, want) in pins.iter() {
                let got = report.structure_constants(*i, *j).expect("closed");
                let want: Vec<Expr> = want
                    .iter()
                    .map(|w| model.scope.parse(w))
                    .collect::<Result<_, _>>()
                    .map_err(e2s)?;
                let text = got.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
                r = r.detail(&format!("[{}, {}]", fields[*i], fields[*j]), &text);
                if got != want.as_slice() {
                    return Ok(r.verdict(Verdict::Fail, format!("structure constants of ({i}, {j}) differ")));
                }
            }
            Ok(r.verdict(Verdict::Pass, "closed with constant structure constants"))
        }
        Check::Determining { pde, generic } => {
            let pde_ = model.pde(pde).map_err(e2s)?;
            let field = model.field(generic).map_err(e2s)?;
            let sys = determining_equations(pde_).map_err(e2s)?;
            let mut sol: Vec<(String, Expr)> = pde_.independents().iter().map(|s| (xi_name(s), field.xi(s))).collect();
            sol.push((ETA_NAME.to_string(), field.eta().clone()));
            let annihilated = sys.annihilated_by(&sol).map_err(e2s)?;
            let t = &pde_.independents()[0];
            let mut args = pde_.independents().to_vec();
            args.push(pde_.dependent().clone());
            let xi_t_u = Expr::func(
                FuncSymbol::new(&xi_name(t), args).with_orders(MultiIndex::from_vars(&[pde_.dependent().clone()])),
            );
            let has = sys
                .equations
                .iter()
                .any(|e| e.div(&xi_t_u).ok().and_then(|q| q.as_rational()).is_some());
            sol.last_mut().expect("eta").1 = &sol.last().expect("eta").1 + &Expr::one();
            let perturbed = sys.annihilated_by(&sol).map_err(e2s)?;
            let r = r
                .detail("equations", sys.equations.len())
                .detail("annihilated", annihilated)
                .detail(&format!("contains {}", xi_t_u), has)
                .detail("perturbed-annihilated", perturbed);
            Ok(if annihilated && has && !perturbed {
                r.verdict(Verdict::Pass, "generic generator solves every equation")
            } else {
                r.verdict(Verdict::Fail, "determining system check failed")
            })
        }
        Check::Reduction {
            pde,
            ansatz,
            derived,
            printed,
            subst,
            note,
        } => {
            let a = model.ansatz(ansatz).map_err(e2s)?;
            let got = pullback(model.pde(pde).map_err(e2s)?, &a).map_err(e2s)?;
            let want = model.reduced(derived).map_err(e2s)?;
            let r = r.detail("pullback", &got.lhs).detail("derived", derived);
            if got.lhs != want.lhs {
                return Ok(r.verdict(Verdict::Fail, format!("pullback differs from `{derived}`")));
            }
            let Some(printed) = printed else {
                return Ok(r.verdict(Verdict::Pass, "pullback equals the derived equation"));
            };
            let p = model.reduced(printed).map_err(e2s)?;
            let subst: Vec<_> = subst
                .iter()
                .map(|(s, e)| -> Result<_, String> {
                    let s = model.scope.symbol(s, Default::default()).map_err(e2s)?.clone();
                    Ok((s, model.scope.parse(e).map_err(e2s)?))
                })
                .collect::<Result<_, _>>()?;
            let cmp = compare_reduced(&got, &p, &subst);
            let r = r.detail("printed", printed);
            Ok(match &cmp.verdict {
                Compared::Exact => r.verdict(Verdict::Pass, "pullback equals the printed equation"),
                Compared::Multiple(f) => r.detail("factor", f).verdict(
                    Verdict::Pass,
                    format!("pullback equals ({f}) times the printed equation"),
                ),
                Compared::UnderSubstitution(f) => r
                    .detail("factor", f)
                    .detail("substitution", format_subst(subst.as_slice()))
                    .verdict(
                        Verdict::MismatchRecorded,
                        "pullback equals the printed equation only under substitution",
                    )
                    .record(&p.lhs, &got.lhs, &cmp.residual, note),
                Compared::Mismatch => r
                    .detail("residual", &cmp.residual)
                    .verdict(Verdict::MismatchRecorded, "printed equation differs from the pullback")
                    .record(&p.lhs, &got.lhs, &cmp.residual, note),
            })
        }
        Check::RejectedAnsatz {
            pde,
            ansatz,
            corrected,
            note,
        } => {
            let p = model.pde(pde).map_err(e2s)?;
            let printed = pullback(p, &model.ansatz(ansatz).map_err(e2s)?);
            let fixed = pullback(p, &model.ansatz(corrected).map_err(e2s)?).map_err(e2s)?;
            let r = r
                .detail("corrected", corrected)
                .detail("corrected-pullback", &fixed.lhs);
            Ok(match printed {
                Err(e @ ReductionError::ResidualOldVariable { .. }) => r
                    .detail("error", &e)
                    .verdict(
                        Verdict::MismatchRecorded,
                        "printed ansatz leaves old variables; the corrected one reduces",
                    )
                    .record(ansatz, corrected, &e, note),
                Err(e) => r
                    .detail("error", &e)
                    .verdict(Verdict::Fail, "unexpected reduction error"),
                Ok(got) => r
                    .detail("pullback", &got.lhs)
                    .verdict(Verdict::Pass, "printed ansatz reduces"),
            })
        }
        Check::UnsupportedAnsatz { ansatz, note } => Ok(match model.ansatz(ansatz) {
            Err(ModelError::Ansatz {
                source: e @ ReductionError::Unsupported(_),
                ..
            }) => r
                .detail("error", &e)
                .detail("note", note)
                .verdict(Verdict::Unsupported, "outside the invariant solver"),
            Err(e) => r.detail("error", &e).verdict(Verdict::Fail, "unexpected error"),
            Ok(_) => r.verdict(Verdict::Fail, "expected the invariant solver to decline"),
        }),
        Check::Chain {
            pde,
            first,
            second,
            direct,
            derived,
        } => {
            let mid = pullback(model.pde(pde).map_err(e2s)?, &model.ansatz(first).map_err(e2s)?).map_err(e2s)?;
            let mid_pde =
                liesym_core::jet::expand_pde("intermediate", mid.lhs.clone(), &mid.independents, &mid.dependent)
                    .map_err(e2s)?;
            let chained = pullback(&mid_pde, &model.ansatz(second).map_err(e2s)?).map_err(e2s)?;
            let straight = pullback(model.pde(pde).map_err(e2s)?, &model.ansatz(direct).map_err(e2s)?).map_err(e2s)?;
            let want = model.reduced(derived).map_err(e2s)?;
            let r = r.detail("chained", &chained.lhs).detail("direct", &straight.lhs);
            Ok(if chained.lhs == straight.lhs && chained.lhs == want.lhs {
                r.verdict(
                    Verdict::Pass,
                    "chained and direct reductions agree with the derived equation",
                )
            } else {
                r.verdict(Verdict::Fail, "chained and direct reductions differ")
            })
        }
        Check::FirstIntegral {
            eq,
            candidate,
            golden,
            note,
        } => {
            let eq_ = model.reduced(eq).map_err(e2s)?;
            let cand = model.reduced(candidate).map_err(e2s)?;
            let c = check_first_integral(&eq_, &cand.lhs).map_err(e2s)?;
            let r = r
                .detail("equation", eq)
                .detail("candidate", candidate)
                .detail("gap", c.gap)
                .detail("multiplier", &c.multiplier)
                .detail("raw", &c.raw)
                .detail("residual", &c.residual);
            if c.residual.is_zero() {
                return Ok(r.verdict(Verdict::Pass, "candidate integrates the equation"));
            }
            let Some(golden) = golden else {
                return Ok(r.verdict(Verdict::Fail, "nonzero residual"));
            };
            let pinned = model.scope.parse(golden).map_err(e2s)?;
            Ok(if pinned == c.residual {
                r.verdict(Verdict::MismatchRecorded, "nonzero residual equals the pinned value")
                    .record(&eq_.lhs, &cand.lhs, &c.residual, note)
            } else {
                r.verdict(Verdict::Fail, "residual differs from the pinned value")
            })
        }
        Check::ClosedForm { eq, solution, expect } => {
            let eq_ = model.reduced(eq).map_err(e2s)?;
            let s = model.solution(solution).map_err(e2s)?;
            let c = verify_closed_form(&eq_.lhs, &s.dependent, &s.independents, &s.value, &s.side).map_err(e2s)?;
            let constraints = c
                .constraints
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            let r = r
                .detail("equation", eq)
                .detail("solution", &s.value)
                .detail("residual", &c.residual)
                .detail("constraints", &constraints);
            match expect {
                Expect::Certified => Ok(if c.certified() {
                    r.verdict(Verdict::Pass, "solution certified")
                } else {
                    r.verdict(Verdict::Fail, "nonzero residual")
                }),
                Expect::Residual(want) => {
                    let want = model.scope.parse(want).map_err(e2s)?;
                    Ok(if !c.certified() && c.residual == want {
                        r.verdict(Verdict::Pass, "residual equals the pinned value")
                    } else {
                        r.verdict(Verdict::Fail, format!("expected residual {want}"))
                    })
                }
                Expect::Amplitude {
                    unknown,
                    value,
                    printed,
                } => {
                    let u = model.scope.symbol(unknown, Default::default()).map_err(e2s)?.clone();
                    let want = model.scope.parse(value).map_err(e2s)?;
                    let solved: Vec<Expr> = c.constraints.iter().filter_map(|k| solve_linear(k, &u)).collect();
                    let ok = !solved.is_empty() && solved.iter().all(|v| *v == want);
                    let r = r.detail(
                        unknown,
                        solved.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                    );
                    let fixed = Expr::sym(&u);
                    Ok(match (ok, printed) {
                        (false, _) => r.verdict(Verdict::Fail, format!("expected {unknown} = {want}")),
                        (true, None) => r.verdict(Verdict::Pass, format!("amplitude {unknown} = {want}")),
                        (true, Some(note)) => r
                            .verdict(
                                Verdict::MismatchRecorded,
                                format!("printed amplitude is free; it must be {want}"),
                            )
                            .record(
                                format!("{} with {fixed} free", s.value),
                                format!("{fixed} = {want}"),
                                &constraints,
                                note,
                            ),
                    })
                }
            }
        }
        Check::Profile { run, pinned } => {
            let spec = model.run(run).map_err(e2s)?;
            let spec = crate::model::RunSpec {
                points: Some(11),
                ..spec.clone()
            };
            let a = numeric::run(model, &spec).map_err(e2s)?;
            let b = numeric::run(model, &numeric::with_method(&spec, Method::FixedRk4, Some(RK4_STEP))).map_err(e2s)?;
            let (ea, eb) = (&a.last().expect("samples").1, &b.last().expect("samples").1);
            let diff = ea.iter().zip(eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            let mut r = r
                .detail("grouping", numeric::grouping_of(&spec.ode))
                .detail("adaptive-end", format!("{:.10}, {:.10}", ea[0], ea[1]))
                .detail("rk4-end", format!("{:.10}, {:.10}", eb[0], eb[1]))
                .detail("max-difference", format!("{diff:.3e}"));
            let mut ok = a.reached_end() && b.reached_end() && diff < CROSS_METHOD_TOL;
            for (z, h, hp) in pinned.iter() {
                let row = a
                    .grid
                    .iter()
                    .find(|(g, _)| g == z)
                    .ok_or_else(|| format!("no sample at {z}"))?;
                let good = (row.1[0] - h).abs() < PINNED_TOL && (hp.is_nan() || (row.1[1] - hp).abs() < PINNED_TOL);
                r = r.detail(&format!("at {z}"), format!("{:.8}, {:.8}", row.1[0], row.1[1]));
                ok &= good;
            }
            Ok(if ok {
                r.verdict(Verdict::Pass, "methods agree and pinned values reproduce")
            } else {
                r.verdict(Verdict::Fail, "profile check failed")
            })
        }
        Check::Rk4Order => {
            let ratio = numeric::rk4_order_ratio().map_err(e2s)?;
            let r = r.detail("ratio", format!("{ratio:.4}"));
            Ok(if (RK4_RATIO.0..=RK4_RATIO.1).contains(&ratio) {
                r.verdict(Verdict::Pass, "fourth-order error ratio")
            } else {
                r.verdict(Verdict::Fail, "error ratio outside the expected range")
            })
        }
    }
}

fn format_subst(s: &[(liesym_core::expr::Symbol, Expr)]) -> String {
    s.iter()
        .map(|(k, v)| format!("{k} -> {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Runs every case concurrently; the report is sorted by label.
pub fn suite(model: &Model) -> Report {
    let results: Vec<CaseResult> = all().par_iter().map(|c| evaluate(model, c)).collect();
    Report::new("paper-suite", results)
}

/// Results by label, for tests.
pub fn by_label(report: &Report) -> BTreeMap<&str, &CaseResult> {
    report.cases.iter().map(|c| (c.label.as_str(), c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn labels_are_unique() {
        let all = all();
        let labels: BTreeSet<_> = all.iter().map(|c| c.label).collect();
        assert_eq!(labels.len(), all.len());
    }

    #[test]
    fn field_specs_substitute_functions() {
        let m = crate::library::builtin();
        let f = field_spec(&m, "x-shift-phi[phi := t^2]").unwrap();
        assert_eq!(f.to_string(), "(t^2)*d_x + (-2*t)*d_u");
        assert!(field_spec(&m, "x-shift-phi[phi = t]").is_err());
    }
}
