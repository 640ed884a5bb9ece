use std::collections::{BTreeMap, HashMap};

use anyhow::{anyhow, bail, Context, Result};
use molkit::finlat::{
    check_closure_rules, congruence_lattice, decompose_finite_mol, is_subdirectly_irreducible,
    validate, write_lattice,
};
use molkit::frames::{
    canonical_frame, check_frame, coordinate, embed_ring, matrix_involution, ring_add,
    ring_inverse, ring_mul, ring_neg, ring_sub, star_polynomial,
};
use molkit::geometry::{
    canonical_representation, check_polarity, closure_cap, components, subgeometry_closure,
    write_geometry, GeometryError,
};
use molkit::terms::{
    identity_holds, identity_sampled, orthoimplication_holds, orthoimplication_sampled, parse,
    to_orthoimplication, Statement, SubspaceModel, Term, Verdict,
};
use molkit::witness::{
    ab_matrices, build_generating_frame, doubling_embed, pd_b_by_reduction, pd_by_reduction,
    replay_generation_chain, verify_frame_doubling, StepReport, WitnessConfig, CHAIN_CHECKLIST,
    DOUBLING_CHECKLIST,
};
use molkit::{FiniteOrtholattice, FormSpace, Frame, Rational, RationalMatrix, Subspace};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input;
use crate::report::{Report, Status};
use crate::{
    Cli, Command, FormArg, FrameArg, FrameCmd, GeomCmd, LatticeCmd, RingOp, SpaceCmd, TermCmd,
    WitnessCmd,
};

pub fn run(cli: &Cli, r: &mut Report) -> Result<()> {
    match &cli.command {
        Command::Lattice(c) => lattice(c, r),
        Command::Space(c) => space(c, r),
        Command::Geom(c) => geom(c, r),
        Command::Frame(c) => frame(c, r),
        Command::Witness(c) => witness(c, r),
        Command::Term(c) => term(c, r, cli.seed),
        Command::Corpus { specs, out } => corpus(specs, out.as_deref(), r, cli.json),
    }
}

fn lattice(c: &LatticeCmd, r: &mut Report) -> Result<()> {
    match c {
        LatticeCmd::Check { lattice } => {
            let l = input::lattice(lattice)?;
            let v = validate(&l);
            r.line(format!("elements: {}", l.len()));
            let notes = v.notes.join("; ");
            for (name, ok) in [
                ("lattice", v.is_lattice),
                ("ortholattice", v.is_ortholattice),
                ("modular", v.is_modular),
                ("orthomodular", v.is_orthomodular),
            ] {
                r.pass_if(name, ok, if ok { String::new() } else { notes.clone() });
            }
        }
        LatticeCmd::Decompose { lattice } => {
            let l = input::lattice(lattice)?;
            match decompose_finite_mol(&l) {
                Ok(d) => {
                    let names: Vec<String> = d.factors.iter().map(ToString::to_string).collect();
                    r.pass_if("isomorphic to product of factors", true, "");
                    r.line(format!("factors: {}", names.join(" x ")));
                    for (x, &y) in d.iso.iter().enumerate() {
                        r.line(format!("{} -> {}", l.name(x), d.product.name(y)));
                    }
                }
                Err(e) => r.pass_if("decomposition", false, e.to_string()),
            }
        }
        LatticeCmd::Congruences { lattice } => {
            let l = input::lattice(lattice)?;
            let cons = congruence_lattice(&l);
            r.line(format!("congruences: {}", cons.len()));
            for (i, theta) in cons.iter().enumerate() {
                let q = theta.quotients(&l);
                let rules = check_closure_rules(&l, &q);
                r.pass_if(
                    format!("congruence {i} quotient closure rules"),
                    rules.is_ok(),
                    rules.err().unwrap_or_default(),
                );
                r.line(format!("{i}: {}", classes(&l, &theta.classes())));
            }
        }
        LatticeCmd::Si { lattice } => {
            let l = input::lattice(lattice)?;
            let si = is_subdirectly_irreducible(&l)?;
            r.pass_if(
                "congruence and perspectivity criteria agree",
                si.agree(),
                format!(
                    "congruences: {}, perspectivity: {}",
                    si.si_by_congruences, si.si_by_perspectivity
                ),
            );
            r.line(format!("subdirectly irreducible: {}", si.si_by_congruences));
            r.line(format!("congruences: {}", si.num_congruences));
            if let Some(m) = &si.minimal {
                r.line(format!("monolith: {}", classes(&l, &m.classes())));
            }
        }
    }
    Ok(())
}

fn classes(l: &FiniteOrtholattice, cls: &[Vec<usize>]) -> String {
    cls.iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter().map(|&x| l.name(x)).collect::<Vec<_>>().join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn form_or_identity(f: &FormArg, n: usize) -> Result<FormSpace> {
    let form = match &f.form {
        Some(spec) => input::form(spec)?,
        None => FormSpace::identity(n),
    };
    if form.dim() != n {
        bail!("form on Q^{} for subspaces of Q^{n}", form.dim());
    }
    Ok(form)
}

fn space(c: &SpaceCmd, r: &mut Report) -> Result<()> {
    match c {
        SpaceCmd::Ortho { form, input } => {
            let u = input::subspace(input)?;
            let f = form_or_identity(form, u.ambient())?;
            let up = f.ortho_complement(&u)?;
            r.pass_if("u ∩ u' = 0", u.intersect(&up)?.is_zero(), "");
            r.pass_if("dim u + dim u' = n", u.dim() + up.dim() == u.ambient(), "");
            r.pass_if("u'' = u", f.ortho_complement(&up)? == u, "");
            r.block(&up.to_text());
        }
        SpaceCmd::Meet { a, b } | SpaceCmd::Join { a, b } => {
            let (u, v) = (input::subspace(a)?, input::subspace(b)?);
            let w = if matches!(c, SpaceCmd::Meet { .. }) {
                u.intersect(&v)?
            } else {
                u.sum(&v)?
            };
            let dims = u.dim() + v.dim() == u.sum(&v)?.dim() + u.intersect(&v)?.dim();
            r.pass_if("dim(u+v) + dim(u∩v) = dim u + dim v", dims, "");
            r.block(&w.to_text());
        }
        SpaceCmd::Perspective { a, b } => {
            let (u, v) = (input::subspace(a)?, input::subspace(b)?);
            match u.perspectivity_witness(&v)? {
                Some(w) => {
                    let top = u.sum(&v)?;
                    let ok = u.sum(&w)? == top
                        && v.sum(&w)? == top
                        && u.intersect(&w)?.is_zero()
                        && v.intersect(&w)?.is_zero();
                    r.pass_if("common complement in [0, u+v]", ok, "");
                    r.block(&w.to_text());
                }
                None => {
                    r.check(
                        "common complement",
                        Status::Pass,
                        format!("none: dim {} ≠ dim {}", u.dim(), v.dim()),
                    );
                }
            }
        }
    }
    Ok(())
}

fn geom(c: &GeomCmd, r: &mut Report) -> Result<()> {
    match c {
        GeomCmd::Components { geometry } => {
            let g = input::geometry(geometry)?;
            let comp = components(&g);
            for (i, part) in comp.parts.iter().enumerate() {
                r.line(format!(
                    "{i}: {}",
                    part.iter()
                        .map(|&p| g.name(p))
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
            if let Some(ok) = comp.mutually_orthogonal {
                r.pass_if("distinct components are orthogonal", ok, "");
            }
        }
        GeomCmd::Polarity { geometry } => {
            let g = input::geometry(geometry)?;
            let p = check_polarity(&g)?;
            r.pass_if("nondegenerate", p.nondegenerate, "");
            r.pass_if("every p^⊥ is a coatom", p.coatoms, "");
            let lines: Vec<String> = p
                .line_failures
                .iter()
                .map(|&(a, b)| format!("({},{})", g.name(a), g.name(b)))
                .collect();
            r.pass_if(
                "every line meets every p^⊥",
                lines.is_empty(),
                lines.join(" "),
            );
            r.pass_if("anisotropic", p.anisotropic, "");
        }
        GeomCmd::Represent { lattice, sub } => {
            let l = input::lattice(lattice)?;
            let sub: Vec<usize> = match sub {
                Some(s) => s
                    .split(',')
                    .map(|n| l.index_of(n.trim()))
                    .collect::<Result<_, _>>()?,
                None => (0..l.len()).collect(),
            };
            let rep = canonical_representation(&l, &sub)?;
            r.pass_if("lattice embedding", rep.verify_embedding().is_ok(), "");
            r.pass_if("η(a') = η(a)^⊥", rep.verify_orthogonality().is_ok(), "");
            r.block(&write_geometry(&rep.geometry));
            for a in 0..rep.source.len() {
                let pts: Vec<&str> = rep.image(a).ones().map(|p| rep.geometry.name(p)).collect();
                r.line(format!("η({}) = {{{}}}", rep.source.name(a), pts.join(",")));
            }
        }
        GeomCmd::Closure {
            geometry,
            points,
            cap,
        } => {
            let g = input::geometry(geometry)?;
            let idx: Vec<usize> = points
                .split(',')
                .map(|p| g.index_of(p.trim()))
                .collect::<Result<_, _>>()?;
            let cap = cap.unwrap_or_else(closure_cap);
            match subgeometry_closure(&g, &g.point_set(&idx), cap) {
                Ok(set) => {
                    r.pass_if("closure reached", true, "");
                    r.line(set.ones().map(|p| g.name(p)).collect::<Vec<_>>().join(" "));
                }
                Err(GeometryError::CapExceeded { cap, partial }) => {
                    r.pass_if(
                        "closure reached",
                        false,
                        format!("cap {cap} exceeded after {} points", partial.len()),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn parse_frame_spec(spec: &str) -> Result<(usize, usize)> {
    let (n, m) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("frame spec is `N:M`"))?;
    Ok((
        n.parse().context("frame order")?,
        m.parse().context("block size")?,
    ))
}

fn build_frame(fa: &FrameArg) -> Result<Frame> {
    let (n, m) = parse_frame_spec(&fa.frame)?;
    let form = fa.form.form.as_deref().map(input::form).transpose()?;
    Ok(canonical_frame(n, m, form)?)
}

fn frame_flags(f: &Frame, r: &mut Report) {
    r.pass_if("frame axioms", true, "");
    r.pass_if("spanning", f.is_spanning(), "");
    if f.form().is_some() {
        r.pass_if("orthogonal", f.is_orthogonal(), "");
    }
}

/// Frame file: headers `a I` or `a I J` (1-based), each followed by a
/// subspace in its text format.
fn parse_frame_file(text: &str) -> Result<(Vec<Subspace>, BTreeMap<(usize, usize), Subspace>)> {
    let mut records: Vec<(Vec<usize>, String)> = Vec::new();
    for line in text.lines() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() == Some(&"a") && toks.len() > 1 {
            let idx = toks[1..]
                .iter()
                .map(|t| t.parse::<usize>().ok().and_then(|v| v.checked_sub(1)))
                .collect::<Option<Vec<_>>>();
            let idx = idx.ok_or_else(|| anyhow!("bad header `{line}`"))?;
            records.push((idx, String::new()));
        } else if let Some((_, body)) = records.last_mut() {
            body.push_str(line);
            body.push('\n');
        } else if !line.trim().is_empty() {
            bail!("data before the first `a` header");
        }
    }
    let mut units = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for (idx, body) in records {
        let u: Subspace = body.parse()?;
        match idx[..] {
            [i] => {
                units.insert(i, u);
            }
            [i, j] => {
                pairs.insert((i, j), u);
            }
            _ => bail!("header needs one or two indices"),
        }
    }
    let n = units.len();
    if units.keys().copied().ne(0..n) {
        bail!("units must be numbered 1..{n}");
    }
    Ok((units.into_values().collect(), pairs))
}

fn frame(c: &FrameCmd, r: &mut Report) -> Result<()> {
    match c {
        FrameCmd::Canonical(fa) => {
            let f = build_frame(fa)?;
            frame_flags(&f, r);
            for i in 0..f.order() {
                r.line(format!("a{} {}", i + 1, input::subspace_line(f.a(i))));
            }
            for i in 0..f.order() {
                for j in i + 1..f.order() {
                    r.line(format!(
                        "a{}{} {}",
                        i + 1,
                        j + 1,
                        input::subspace_line(f.pair(i, j))
                    ));
                }
            }
        }
        FrameCmd::Check { file, form } => {
            let (units, pairs) = parse_frame_file(&input::read(file)?)?;
            let form = form.form.as_deref().map(input::form).transpose()?;
            match check_frame(units, &pairs, form) {
                Ok(f) => frame_flags(&f, r),
                Err(e) => r.pass_if("frame axioms", false, e.to_string()),
            }
        }
        FrameCmd::RingOp {
            op,
            frame,
            at,
            args,
        } => ring_op(*op, frame, at, args, r)?,
    }
    Ok(())
}

fn ring_op(op: RingOp, fa: &FrameArg, at: &str, args: &[String], r: &mut Report) -> Result<()> {
    let f = build_frame(fa)?;
    let (i, j) = input::index_pair(at)?;
    let mats = args
        .iter()
        .map(|a| input::inline_matrix(a))
        .collect::<Result<Vec<_>>>()?;
    let want = match op {
        RingOp::Add | RingOp::Sub | RingOp::Mul => 2,
        _ => 1,
    };
    if mats.len() != want {
        bail!("{op:?} takes {want} operand(s)");
    }
    let elems = mats
        .iter()
        .map(|m| embed_ring(&f, m, i, j))
        .collect::<Result<Vec<_>, _>>()?;
    let x = &mats[0];
    let (result, expected) = match op {
        RingOp::Add => (
            Some(ring_add(&f, &elems[0], &elems[1])?),
            Some(x + &mats[1]),
        ),
        RingOp::Sub => (
            Some(ring_sub(&f, &elems[0], &elems[1])?),
            Some(x - &mats[1]),
        ),
        RingOp::Mul => (
            Some(ring_mul(&f, &elems[0], &elems[1])?),
            Some(x * &mats[1]),
        ),
        RingOp::Neg => (Some(ring_neg(&f, &elems[0])?), Some(-x)),
        RingOp::Inv => (ring_inverse(&f, &elems[0])?, x.inverse().ok()),
        RingOp::Star => {
            let form = f.form().ok_or_else(|| anyhow!("star needs --form"))?;
            let m = x.rows();
            let alpha: Vec<RationalMatrix> = (0..f.order())
                .map(|b| form.gram().submatrix(b * m, b * m, m, m))
                .collect();
            let mut big = RationalMatrix::zeros(m * f.order(), m * f.order());
            big.set_block(0, 0, x);
            let oracle = matrix_involution(&alpha, &big)?.submatrix(0, 0, m, m);
            (Some(star_polynomial(&f, &elems[0])?.value), Some(oracle))
        }
    };
    match (result, expected) {
        (Some(res), Some(exp)) => {
            let got = coordinate(&f, &res)?;
            r.pass_if(
                "lattice polynomial agrees with matrix arithmetic",
                got == exp,
                format!(
                    "polynomial [{}], matrix [{}]",
                    input::matrix_inline(&got),
                    input::matrix_inline(&exp)
                ),
            );
            r.line(format!("result: {}", input::matrix_inline(&got)));
            r.line(format!("carrier {}", input::subspace_line(res.carrier())));
        }
        (None, None) => {
            r.pass_if("not invertible in the lattice nor as a matrix", true, "");
            r.line("result: none");
        }
        (got, exp) => r.pass_if(
            "invertibility agrees",
            false,
            format!("lattice: {}, matrix: {}", got.is_some(), exp.is_some()),
        ),
    }
    Ok(())
}

fn steps_into(rep: &StepReport, r: &mut Report, verbose: bool) {
    for s in &rep.steps {
        if verbose || !s.passed {
            let witness = if s.passed {
                String::new()
            } else {
                format!("lhs {} | rhs {}", s.lhs, s.rhs)
            };
            r.pass_if(format!("{} {}", s.id, s.label), s.passed, witness);
        }
    }
}

fn witness(c: &WitnessCmd, r: &mut Report) -> Result<()> {
    match c {
        WitnessCmd::Ab { k, a, b } => {
            let (a, b) = (input::rational(a)?, input::rational(b)?);
            let (am, bm) = ab_matrices(*k, &a, &b)?;
            r.pass_if(
                "positive definite by leading minors",
                am.is_positive_definite()? && bm.is_positive_definite()?,
                "",
            );
            let red =
                pd_by_reduction(*k, &a, &b, &Rational::zero())? && pd_b_by_reduction(*k, &a, &b)?;
            r.pass_if("positive definite by block reduction", red, "");
            r.line(format!("A_{k} ="));
            r.block(&am.to_string());
            r.line(format!("B_{k} ="));
            r.block(&bm.to_string());
        }
        WitnessCmd::M2 { k, verify } => {
            let inst = build_generating_frame(&WitnessConfig::level(*k)?)?;
            steps_into(&inst.report, r, *verify);
            if !*verify {
                r.pass_if("all identities", inst.report.passed(), "");
            }
            r.line(format!(
                "ambient Q^{}, blocks of size {}",
                3 * inst.config.n(),
                inst.config.n()
            ));
            r.line(format!("sign reading: {:?}", inst.reading));
        }
        WitnessCmd::LemmaM { a, b, depth } => {
            let (a, b) = (input::inline_matrix(a)?, input::inline_matrix(b)?);
            let rep = verify_frame_doubling(&a, &b, *depth)?;
            steps_into(&rep, r, true);
            let missing = rep.uncovered(DOUBLING_CHECKLIST);
            r.pass_if("checklist covered", missing.is_empty(), missing.join(", "));
        }
        WitnessCmd::M1 { k, cap } => {
            let rep = replay_generation_chain(*k, cap.unwrap_or_else(closure_cap))?;
            steps_into(&rep.steps, r, true);
            let missing = rep.steps.uncovered(CHAIN_CHECKLIST);
            r.pass_if("checklist covered", missing.is_empty(), missing.join(", "));
            r.line(format!(
                "ambient Q^{}; generation is sampled, not decided",
                rep.ambient
            ));
            for (n, t) in rep.trace.iter().enumerate() {
                r.line(format!("{n:>3} dim {:>2} {}", t.dim, t.name));
            }
        }
        WitnessCmd::Double { input } => {
            let u = input::subspace(input)?;
            let d = doubling_embed(&u);
            r.pass_if("dim doubles", d.dim() == 2 * u.dim(), "");
            let (f, g) = (
                FormSpace::identity(u.ambient()),
                FormSpace::identity(2 * u.ambient()),
            );
            r.pass_if(
                "commutes with orthocomplement",
                doubling_embed(&f.ortho_complement(&u)?) == g.ortho_complement(&d)?,
                "",
            );
            r.block(&d.to_text());
        }
    }
    Ok(())
}

enum Model {
    Finite(FiniteOrtholattice),
    Space(SubspaceModel),
}

fn model(spec: &str) -> Result<Model> {
    match spec.strip_prefix("space:") {
        Some(f) => Ok(Model::Space(SubspaceModel {
            form: input::form(f)?,
        })),
        None => Ok(Model::Finite(input::lattice(spec)?)),
    }
}

fn verdict(r: &mut Report, name: &str, v: &Verdict) {
    let status = match (v.holds, v.conclusive) {
        (false, _) => Status::Fail,
        (true, true) => Status::Pass,
        (true, false) => Status::Inconclusive,
    };
    let witness = match &v.counterexample {
        Some(cx) => cx
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", "),
        None => format!("{} assignments", v.checked),
    };
    r.check(name, status, witness);
}

fn term(c: &TermCmd, r: &mut Report, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match c {
        TermCmd::Eval {
            model: m,
            term,
            env,
        } => {
            let Model::Finite(l) = model(m)? else {
                bail!("eval needs a finite model")
            };
            let t: Term = term.parse()?;
            let mut assign = HashMap::new();
            for pair in env.split(',').filter(|s| !s.trim().is_empty()) {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| anyhow!("assignments are `x=a`"))?;
                assign.insert(k.trim().to_string(), l.index_of(v.trim())?);
            }
            let env = assign.into_iter().collect();
            r.line(l.name(t.eval(&l, &env)?).to_string());
        }
        TermCmd::Check {
            model: m,
            statement,
            samples,
        } => {
            let m = model(m)?;
            match (parse(statement)?, &m) {
                (Statement::Identity(g, h), Model::Finite(l)) => {
                    verdict(r, &format!("{g} = {h}"), &identity_holds(&g, &h, l)?)
                }
                (Statement::Identity(g, h), Model::Space(s)) => verdict(
                    r,
                    &format!("{g} = {h}"),
                    &identity_sampled(&g, &h, s, *samples, &mut rng)?,
                ),
                (Statement::OrthoImplication(oi), Model::Finite(l)) => {
                    verdict(r, &oi.to_string(), &orthoimplication_holds(&oi, l)?)
                }
                (Statement::OrthoImplication(oi), Model::Space(s)) => verdict(
                    r,
                    &oi.to_string(),
                    &orthoimplication_sampled(&oi, s, *samples, &mut rng)?,
                ),
                (Statement::Term(_), _) => bail!("expected `(= g h)` or `(oimp ...)`"),
            }
        }
        TermCmd::Translate {
            statement,
            model: m,
        } => {
            let Statement::Identity(g, h) = parse(statement)? else {
                bail!("translate takes an identity `(= g h)`")
            };
            let oi = to_orthoimplication(&g, &h);
            r.line(oi.to_string());
            if let Some(m) = m {
                let Model::Finite(l) = model(m)? else {
                    bail!("translate checks need a finite model")
                };
                let below = identity_holds(&Term::meet(g.clone(), h.clone()), &g, &l)?;
                verdict(r, "g ≤ h", &below);
                if below.holds {
                    let a = identity_holds(&g, &h, &l)?;
                    let b = orthoimplication_holds(&oi, &l)?;
                    r.pass_if("identity ⇔ orthoimplication", a.holds == b.holds, "");
                    r.line(format!("identity holds: {}", a.holds));
                    r.line(format!("orthoimplication holds: {}", b.holds));
                }
            }
        }
    }
    Ok(())
}

fn corpus(specs: &[String], out: Option<&str>, r: &mut Report, json: bool) -> Result<()> {
    if specs.is_empty() {
        bail!("corpus needs at least one spec");
    }
    for spec in specs {
        let l = input::builtin_lattice(spec)?;
        let text = write_lattice(&l);
        match out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let name: String = spec
                    .chars()
                    .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                    .collect();
                let path = std::path::Path::new(dir).join(format!("{name}.lat"));
                std::fs::write(&path, &text)?;
                r.line(format!(
                    "{spec}: {} elements -> {}",
                    l.len(),
                    path.display()
                ));
            }
            None if json => {
                r.line(format!("{spec}: {} elements", l.len()));
                r.block(&text);
            }
            None => {
                use std::io::Write;
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
        }
    }
    Ok(())
}
