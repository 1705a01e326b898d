//! Canonical text form of a description.
//!
//! Round-trip law: `parse_game(canonical_text(&d)) == d` for any parsed `d`.

use super::{GameDescription, TerminationKind};
use std::fmt::Write;

/// Serialize a description back to source text in a fixed layout:
/// four blocks in standard order, four-space indent steps, parameters in
/// a fixed key order.
pub fn canonical_text(desc: &GameDescription) -> String {
    let mut out = String::new();
    out.push_str("SpriteSet\n");
    // Children always follow their parent in declaration order, so a
    // single pass with depth lookup reproduces the tree.
    for s in &desc.sprites {
        let depth = {
            let mut d = 1usize;
            let mut cur = s.parent.as_deref();
            while let Some(p) = cur {
                d += 1;
                cur = desc.sprite(p).and_then(|x| x.parent.as_deref());
            }
            d
        };
        let _ = write!(out, "{}{} > {}", "    ".repeat(depth), s.name, s.class.keyword());
        if let Some(o) = s.params.orientation {
            let _ = write!(out, " orientation={}", o.token());
        }
        if let Some(v) = s.params.speed_period {
            let _ = write!(out, " speedPeriod={v}");
        }
        if let Some(t) = &s.params.stype {
            let _ = write!(out, " stype={t}");
        }
        if let Some(p) = s.params.prob {
            let _ = write!(out, " prob={p}");
        }
        if let Some(l) = s.params.limit {
            let _ = write!(out, " limit={l}");
        }
        if let Some(e) = &s.params.exit_name {
            let _ = write!(out, " exitName={e}");
        }
        out.push('\n');
    }
    out.push_str("InteractionSet\n");
    for r in &desc.interactions {
        let _ = write!(out, "    {} {} > {}", r.first, r.second, r.effect.keyword());
        if let Some(t) = &r.stype {
            let _ = write!(out, " stype={t}");
        }
        if r.kill_second {
            out.push_str(" killSecond=True");
        }
        if r.score_change != 0 {
            let _ = write!(out, " scoreChange={}", r.score_change);
        }
        out.push('\n');
    }
    out.push_str("TerminationSet\n");
    for t in &desc.terminations {
        let _ = write!(out, "    {}", t.kind.keyword());
        match t.kind {
            TerminationKind::SpriteCounter | TerminationKind::SpriteCounterMore => {
                let _ = write!(out, " stype={}", t.stypes[0]);
            }
            TerminationKind::MultiSpriteCounter => {
                for (i, s) in t.stypes.iter().enumerate() {
                    let _ = write!(out, " stype{}={}", i + 1, s);
                }
            }
            TerminationKind::Timeout => {}
        }
        let _ = writeln!(
            out,
            " limit={} win={}",
            t.limit,
            if t.win { "True" } else { "False" }
        );
    }
    out.push_str("LevelMapping\n");
    for (ch, names) in &desc.level_mapping {
        let _ = writeln!(out, "    {ch} > {}", names.join(" "));
    }
    out
}
