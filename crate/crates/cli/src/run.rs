use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};
use thompson_core::cosetgraph::{CosetBall, ExploreOptions};
use thompson_core::elements::{parse_word, CellMap, GroupClass};
use thompson_core::ends::{
    end_traces, ends_report_on, inner_boundary, member_a, sageev_cut, symdiff_ball, symdiff_exact_in,
    BallGraph, EndsReport, SearchOptions,
};
use thompson_core::facert::{self, FACertificate};
use thompson_core::treeact::{classify_isometry, fixed_point_suite, Isometry, ModWord, TreeBall};
use thompson_core::{Dyadic, Error};

use crate::{
    AiCmd, BallArgs, BallCmd, Cli, Command, ElementArg, ElementCmd, EndsCmd, FaCmd, Failure, Format,
    ScheduleArgs, TreeCmd,
};

const OUTPUT_FORMAT_VERSION: u32 = 1;
const VERIFIED: &str = "CERTIFICATE VERIFIED (Lemma 4.1(4))";

type Out = Result<String, Failure>;

pub fn dispatch(cli: &Cli) -> Out {
    if cli.format == Format::Dot && !dot_capable(&cli.command) {
        return Err(Failure::Usage("--format dot applies to `ball export-dot` and `tree classify`".into()));
    }
    match &cli.command {
        Command::Element(c) => element(cli, c),
        Command::Ball(c) => ball(cli, c),
        Command::Ends(c) => ends(cli, c),
        Command::Ai(c) => ai(cli, c),
        Command::Fa(c) => fa(cli, c),
        Command::Tree(c) => tree(cli, c),
    }
}

fn dot_capable(c: &Command) -> bool {
    matches!(
        c,
        Command::Ball(BallCmd::ExportDot { .. }) | Command::Tree(TreeCmd::Classify { .. })
    )
}

/// One self-describing document per run.
fn document(cli: &Cli, command: &str, config: Value, result: Value) -> String {
    let mut config = config;
    config["budget"] = json!(cli.budget);
    config["seed"] = json!(cli.seed);
    let doc = json!({
        "format_version": OUTPUT_FORMAT_VERSION,
        "command": command,
        "config": config,
        "result": result,
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn resolve(e: &ElementArg) -> Result<CellMap, Failure> {
    let parsed = match (&e.name, &e.word, &e.map) {
        (Some(n), _, _) => parse_word(n),
        (_, Some(w), _) => parse_word(w),
        (_, _, Some(m)) => m.parse(),
        _ => return Err(Failure::Usage("one of --name, --word, --map is required".into())),
    };
    Ok(parsed?)
}

fn spelled(e: &ElementArg) -> String {
    e.name.clone().or_else(|| e.word.clone()).or_else(|| e.map.clone()).unwrap_or_default()
}

fn element(cli: &Cli, c: &ElementCmd) -> Out {
    let json = cli.format == Format::Json;
    match c {
        ElementCmd::Eval { element, at } => {
            let g = resolve(element)?;
            let x: Dyadic = at.parse()?;
            let y = g.evaluate(&x)?;
            Ok(if json {
                document(cli, "element eval", json!({"element": spelled(element), "at": x}), json!(y))
            } else {
                format!("{y}\n")
            })
        }
        ElementCmd::Compose { words } => {
            let mut acc = CellMap::identity();
            for w in words {
                acc = acc.compose(&parse_word(w)?);
            }
            Ok(if json {
                document(
                    cli,
                    "element compose",
                    json!({"words": words}),
                    json!({"element": acc, "class": acc.class()}),
                )
            } else {
                format!("{acc}\nclass {}\n", acc.class())
            })
        }
        ElementCmd::Order { element, bound } => {
            let g = resolve(element)?;
            let order = g.order_up_to(*bound);
            Ok(if json {
                document(
                    cli,
                    "element order",
                    json!({"element": spelled(element), "bound": bound}),
                    json!({ "order": order }),
                )
            } else {
                match order {
                    Some(n) => format!("{n}\n"),
                    None => format!("no finite order up to {bound}\n"),
                }
            })
        }
        ElementCmd::Small { element } => {
            let g = resolve(element)?;
            let w = g.is_small();
            Ok(if json {
                document(cli, "element small", json!({"element": spelled(element)}), json!({ "witness": w }))
            } else {
                match w {
                    Some(c) => format!("small: identity on {c:?} ({c})\n"),
                    None => "not small\n".into(),
                }
            })
        }
        ElementCmd::Support { element } => {
            let g = resolve(element)?;
            let cells = g.support();
            Ok(if json {
                document(cli, "element support", json!({"element": spelled(element)}), json!(cells))
            } else if cells.is_empty() {
                "empty\n".into()
            } else {
                cells.iter().map(|c| format!("{c:?}\n")).collect()
            })
        }
    }
}

fn explore_options(cli: &Cli) -> ExploreOptions {
    ExploreOptions {
        budget: cli.budget,
        threads: cli.threads,
    }
}

/// Explore, or load from the cache directory when one is configured. A
/// cached ball larger than the budget is refused rather than truncated.
fn load_ball(cli: &Cli, group: GroupClass, radius: u32) -> Result<CosetBall, Failure> {
    let opts = explore_options(cli);
    let ball = match &cli.cache_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(Error::from)?;
            CosetBall::load_or_explore(dir, group, radius, opts)?
        }
        None => CosetBall::explore(group, radius, opts)?,
    };
    if ball.len() > cli.budget {
        let shells = ball.shell_sizes();
        let mut seen = 0;
        let completed = shells
            .iter()
            .take_while(|&&n| {
                seen += n;
                seen <= cli.budget
            })
            .count() as u32;
        return Err(Error::ResourceLimit {
            budget: cli.budget,
            vertices: ball.len(),
            completed_radius: completed.saturating_sub(1),
            radius_in_progress: completed,
        }
        .into());
    }
    Ok(ball)
}

fn ball_config(b: &BallArgs) -> Value {
    json!({"group": b.group, "radius": b.radius})
}

fn ball(cli: &Cli, c: &BallCmd) -> Out {
    let json = cli.format == Format::Json;
    match c {
        BallCmd::Explore { ball: b } => {
            let ball = load_ball(cli, b.group, b.radius)?;
            let shells = ball.shell_sizes();
            if json {
                return Ok(document(
                    cli,
                    "ball explore",
                    ball_config(b),
                    json!({"vertices": ball.len(), "edges": ball.edges().len(), "shells": shells}),
                ));
            }
            let mut out = format!(
                "coset ball of ({}, {}_[0,1/2]) radius {} budget {}\n",
                b.group, b.group, b.radius, cli.budget
            );
            for (d, n) in shells.iter().enumerate() {
                writeln!(out, "  shell {d}: {n}").unwrap();
            }
            writeln!(out, "vertices {} edges {}", ball.len(), ball.edges().len()).unwrap();
            Ok(out)
        }
        BallCmd::Info { ball: b } => {
            let ball = load_ball(cli, b.group, b.radius)?;
            let in_a = ball.states().filter(|s| member_a(s)).count();
            let frontier = ball.frontier().count();
            let gens: Vec<Value> = ball
                .generators()
                .iter()
                .map(|g| json!({"name": g.name, "element": g.element}))
                .collect();
            if json {
                return Ok(document(
                    cli,
                    "ball info",
                    ball_config(b),
                    json!({
                        "vertices": ball.len(),
                        "edges": ball.edges().len(),
                        "shells": ball.shell_sizes(),
                        "frontier": frontier,
                        "in_a": in_a,
                        "generators": gens,
                    }),
                ));
            }
            let mut out = format!("group {} radius {} budget {}\n", b.group, b.radius, cli.budget);
            for g in ball.generators() {
                writeln!(out, "  generator {}: {}", g.name, g.element).unwrap();
            }
            writeln!(out, "vertices {} edges {}", ball.len(), ball.edges().len()).unwrap();
            writeln!(out, "shells {:?}", ball.shell_sizes()).unwrap();
            writeln!(out, "frontier {frontier}").unwrap();
            writeln!(out, "in A {in_a}, outside A {}", ball.len() - in_a).unwrap();
            Ok(out)
        }
        BallCmd::ExportDot { ball: b, out } => {
            let ball = load_ball(cli, b.group, b.radius)?;
            let boundary: Vec<usize> = inner_boundary(&ball).vertices().collect();
            let dot = ball.to_dot(&boundary);
            match out {
                Some(path) => {
                    fs::write(path, &dot).map_err(Error::from)?;
                    Ok(format!("wrote {} ({} vertices)\n", path.display(), ball.len()))
                }
                None => Ok(dot),
            }
        }
    }
}

fn schedule_config(a: &ScheduleArgs) -> Value {
    json!({
        "group": a.group,
        "schedule": a.schedule,
        "max_translations": a.max_translations,
        "rounds": a.rounds,
    })
}

fn run_report(cli: &Cli, a: &ScheduleArgs) -> Result<(CosetBall, EndsReport), Failure> {
    if a.schedule.is_empty() || a.schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Usage("--schedule must be increasing".into()));
    }
    let top = *a.schedule.last().unwrap();
    let ball = load_ball(cli, a.group, top + 1)?;
    let search = SearchOptions {
        max_translations: a.max_translations,
        rounds: a.rounds,
    };
    let rep = ends_report_on(&ball, &a.schedule, cli.budget, search)?;
    Ok((ball, rep))
}

fn report_text(rep: &EndsReport) -> String {
    let mut out = format!(
        "ends of ({}, {}_[0,1/2]): schedule {:?}, explored radius {} ({} vertices), budget {}\n",
        rep.group, rep.group, rep.schedule, rep.explored_radius, rep.explored_vertices, rep.budget
    );
    for e in &rep.entries {
        writeln!(out, "radius {} ({} vertices): {}", e.radius, e.vertices, e.statement).unwrap();
        if let Some(c) = &e.best {
            writeln!(
                out,
                "  K: {} vertices, depth <= {}, {} frontier-touching, {} persistent; recipe {}",
                c.size,
                c.max_depth,
                c.frontier_touching,
                c.persistent,
                c.recipe.join(" + ")
            )
            .unwrap();
        }
    }
    writeln!(out, "best candidate bound {}", rep.best_bound).unwrap();
    for n in &rep.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}

fn ends(cli: &Cli, c: &EndsCmd) -> Out {
    let json = cli.format == Format::Json;
    match c {
        EndsCmd::Report { args } => {
            let (_, rep) = run_report(cli, args)?;
            Ok(if json {
                document(cli, "ends report", schedule_config(args), to_value(&rep))
            } else {
                report_text(&rep)
            })
        }
        EndsCmd::Amplify { args } => {
            let (_, rep) = run_report(cli, args)?;
            let Some(a) = &rep.amplification else {
                let report = if json {
                    document(cli, "ends amplify", schedule_config(args), Value::Null)
                } else {
                    report_text(&rep)
                };
                return Err(Failure::Property {
                    report,
                    message: "no compact set with >= 3 persistent components has a verified disjoint translate"
                        .into(),
                });
            };
            let r = &a.result;
            Ok(if json {
                document(cli, "ends amplify", schedule_config(args), to_value(a))
            } else {
                format!(
                    "radius {}: translation by {} (depth {})\n  K: {} components, gamma K: {}, K u gamma K: {} >= 2n-2 = {}\n  separation: components preserved {}, pairwise distinct {}\n",
                    a.radius,
                    a.translation,
                    a.translation_depth,
                    r.n,
                    r.n_translate,
                    r.amplified,
                    r.bound,
                    r.separation.components_preserved,
                    r.separation.pairwise_distinct
                )
            })
        }
        EndsCmd::Traces { args } => {
            let (ball, rep) = run_report(cli, args)?;
            let first = &rep.entries[0];
            let Some(k) = first.best.as_ref().map(|c| c.set.clone()) else {
                return Err(Failure::Property {
                    report: String::new(),
                    message: format!("no compact set at radius {}", first.radius),
                });
            };
            let g = BallGraph::from_coset_ball(&ball);
            let traces = end_traces(&g, &k, &args.schedule);
            if json {
                return Ok(document(cli, "ends traces", schedule_config(args), to_value(&traces)));
            }
            let mut out = format!(
                "traces of K ({} vertices) from radius {} over {:?}\n",
                k.len(),
                first.radius,
                args.schedule
            );
            for (i, t) in traces.iter().enumerate() {
                let links: Vec<String> = t.links.iter().map(|(r, v)| format!("r{r}:v{v}")).collect();
                writeln!(out, "  trace {i}: {}", links.join(" -> ")).unwrap();
            }
            let full = traces.iter().filter(|t| t.persistence() == args.schedule.len()).count();
            writeln!(out, "{full} traces span the whole schedule").unwrap();
            Ok(out)
        }
    }
}

fn ai(cli: &Cli, c: &AiCmd) -> Out {
    let json = cli.format == Format::Json;
    match c {
        AiCmd::Exact { gen, group } => {
            let v = parse_word(gen)?;
            let n = symdiff_exact_in(&v, *group);
            Ok(if json {
                document(cli, "ai exact", json!({"gen": gen, "group": group}), json!(n))
            } else {
                format!("{n}\n")
            })
        }
        AiCmd::Ball { gen, ball: b } => {
            let v = parse_word(gen)?;
            let ball = load_ball(cli, b.group, b.radius)?;
            let ledger = symdiff_ball(gen, &v, &ball);
            let exact = symdiff_exact_in(&v, b.group);
            // flips at depth < R - stabilization margin are final
            let stabilized = ledger.stabilization_radius < b.radius;
            let report = if json {
                document(
                    cli,
                    "ai ball",
                    json!({"gen": gen, "group": b.group, "radius": b.radius}),
                    json!({"ledger": to_value(&ledger), "exact": exact, "stabilized": stabilized}),
                )
            } else {
                let mut out = format!(
                    "{gen} on the radius {} ball of {}: {} flip states (exact {exact}), last flip depth {}\n",
                    b.radius,
                    b.group,
                    ledger.total,
                    ledger.stabilization_radius.saturating_sub(1)
                );
                for f in &ledger.flips {
                    writeln!(out, "  depth {} {:?}: {}", f.depth, f.direction, f.state).unwrap();
                }
                out
            };
            if stabilized && ledger.total != exact {
                return Err(Failure::Property {
                    report,
                    message: format!("ball count {} differs from exact count {exact}", ledger.total),
                });
            }
            Ok(report)
        }
        AiCmd::Cut { ball: b } => {
            let ball = load_ball(cli, b.group, b.radius)?;
            let cut = sageev_cut(&ball, member_a);
            let report = if json {
                document(cli, "ai cut", ball_config(b), to_value(&cut))
            } else {
                format!(
                    "radius {}: {} cut edges, {} states in A, {} outside, {} crossing components\n{}\n",
                    b.radius,
                    cut.cut_edges.len(),
                    cut.inside,
                    cut.outside,
                    cut.crossing_components,
                    if cut.separates() { "cut separates" } else { "cut does not separate" }
                )
            };
            if !cut.separates() {
                return Err(Failure::Property {
                    report,
                    message: "the cut does not separate A from its complement".into(),
                });
            }
            Ok(report)
        }
    }
}

fn certify(cli: &Cli, command: &str, cert: &FACertificate, out: Option<&std::path::PathBuf>) -> Out {
    if let Some(path) = out {
        fs::write(path, cert.to_json()).map_err(Error::from)?;
    }
    let audit = match facert::verify(cert) {
        Ok(a) => a,
        Err(e) => {
            return Err(Failure::Property {
                report: format!("CERTIFICATE FAILED: {e}\n"),
                message: e.to_string(),
            })
        }
    };
    if cli.format == Format::Json {
        return Ok(document(
            cli,
            command,
            json!({"group": cert.group}),
            json!({"certificate": to_value(cert), "audit": audit, "verified": true}),
        ));
    }
    let mut text: String = audit.iter().map(|l| format!("{l}\n")).collect();
    text += VERIFIED;
    text.push('\n');
    Ok(text)
}

fn fa(cli: &Cli, c: &FaCmd) -> Out {
    let built = |r: Result<FACertificate, Error>| {
        r.map_err(|e| Failure::Property {
            report: format!("CERTIFICATE FAILED: {e}\n"),
            message: e.to_string(),
        })
    };
    match c {
        FaCmd::TCert { out } => certify(cli, "fa t-cert", &built(facert::t_certificate())?, out.as_ref()),
        FaCmd::VCert { out } => certify(cli, "fa v-cert", &built(facert::v_certificate())?, out.as_ref()),
        FaCmd::Verify { file } => {
            let text = fs::read_to_string(file).map_err(Error::from)?;
            let cert = FACertificate::from_json(&text)?;
            certify(cli, "fa verify", &cert, None)
        }
    }
}

fn tree(cli: &Cli, c: &TreeCmd) -> Out {
    match c {
        TreeCmd::Suite { radius, max_syllables } => {
            let ball = TreeBall::new(*radius);
            let rep = fixed_point_suite(&ball, *max_syllables)?;
            let report = if cli.format == Format::Json {
                document(
                    cli,
                    "tree suite",
                    json!({"radius": radius, "max_syllables": max_syllables}),
                    to_value(&rep),
                )
            } else {
                let mut out = format!(
                    "tree ball radius {} ({} vertices), elements up to {} syllables: {} ({} elliptic, {} hyperbolic)\n",
                    radius,
                    ball.len(),
                    max_syllables,
                    rep.elements,
                    rep.elliptic,
                    rep.hyperbolic
                );
                writeln!(
                    out,
                    "{} pairs: {} with disjoint fixed sets, {} stabilising pairs, {} skipped (fixed set reaches the frontier)",
                    rep.pairs, rep.disjoint_instances, rep.stabilized_instances, rep.unbounded_skipped
                )
                .unwrap();
                for v in &rep.violations {
                    let g2 = v.g2.as_ref().map(|g| format!(", {g}")).unwrap_or_default();
                    writeln!(out, "  violation {:?} ({}{g2}): {}", v.rule, v.g1, v.detail).unwrap();
                }
                writeln!(out, "{} violations", rep.violations.len()).unwrap();
                out
            };
            if rep.passed() {
                Ok(report)
            } else {
                Err(Failure::Property {
                    report,
                    message: format!("{} violations", rep.violations.len()),
                })
            }
        }
        TreeCmd::Classify { word, radius } => {
            let w: ModWord = word.parse()?;
            let ball = TreeBall::new(*radius);
            let class = classify_isometry(&w, &ball);
            match cli.format {
                Format::Json => Ok(document(
                    cli,
                    "tree classify",
                    json!({"word": w, "radius": radius}),
                    to_value(&class),
                )),
                Format::Dot => {
                    let fixed = ball.fixed_set(&w);
                    let axis: Vec<usize> = match &class {
                        Isometry::Hyperbolic { axis, .. } => {
                            axis.iter().filter_map(|v| ball.index_of(v)).collect()
                        }
                        _ => Vec::new(),
                    };
                    Ok(ball.to_dot(&fixed, &axis))
                }
                Format::Text => Ok(match class {
                    Isometry::Elliptic { fixed } => format!("{w}: elliptic, fixes {fixed}\n"),
                    Isometry::Hyperbolic {
                        translation_length,
                        axis,
                    } => {
                        let names: Vec<String> = axis.iter().map(ToString::to_string).collect();
                        format!(
                            "{w}: hyperbolic, translation length {translation_length}\n  axis: {}\n",
                            names.join(" - ")
                        )
                    }
                    Isometry::Unresolved { required_radius } => {
                        format!("{w}: unresolved, needs radius {required_radius}\n")
                    }
                }),
            }
        }
    }
}
