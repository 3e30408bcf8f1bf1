//! Slide and split moves on templates.
//!
//! A slide turns a branch line with two incoming strips half a turn about
//! the flow direction: the two incoming strips trade places, the outgoing
//! strips reverse their order and every strip end at the line picks up one
//! half-twist. Applying it twice at the same line returns the original
//! template exactly.
//!
//! A split moves part of a branch line upstream. Cutting the outgoing slots
//! of line `B` at `p` gives `Ba` (slots `0..p`) and `Bb` (the rest); every
//! strip `r` entering `B` is doubled lengthwise into `ra -> Ba` and
//! `rb -> Bb`, which leave `r`'s source as two neighboring slots (in the
//! order `ra, rb` unless `r` is twisted, which reverses them).

use crate::shift::fresh_id;

use super::{Template, TemplateError};

fn line_of(t: &Template, id: &str) -> Result<usize, TemplateError> {
    t.line_index(id)
        .ok_or_else(|| TemplateError::UnknownLine(id.to_string()))
}

/// Slide at incoming slots `(first_slot, first_slot + 1)` of `line`.
pub fn slide_move(t: &Template, line: &str, first_slot: usize) -> Result<Template, TemplateError> {
    let b = line_of(t, line)?;
    let incoming = t.lines()[b].incoming;
    if incoming < 2 {
        return Err(TemplateError::BadSite(format!(
            "branch line `{line}` has a single incoming slot"
        )));
    }
    if first_slot + 1 >= incoming {
        return Err(TemplateError::BadSite(format!(
            "branch line `{line}` has no incoming slots {first_slot} and {}",
            first_slot + 1
        )));
    }
    if incoming > 2 {
        return Err(TemplateError::BadSite(format!(
            "branch line `{line}` has {incoming} incoming slots; a slide needs exactly 2"
        )));
    }
    let (mut ins, mut outs) = t.slot_lists();
    let mut twists: Vec<i64> = t.strips().iter().map(|s| s.half_twists).collect();
    for &s in ins[b].iter().chain(&outs[b]) {
        twists[s] ^= 1;
    }
    ins[b].swap(0, 1);
    outs[b].reverse();
    Ok(rebuild(t, ins, outs, twists))
}

fn rebuild(
    t: &Template,
    ins: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
    twists: Vec<i64>,
) -> Template {
    let line_ids = t.lines().iter().map(|l| l.id.clone()).collect();
    let strips = t
        .strips()
        .iter()
        .zip(twists)
        .map(|(s, tw)| (s.id.clone(), tw))
        .collect();
    Template::from_slots(line_ids, &ins, &outs, strips)
}

/// Split `line` between outgoing slots `cut - 1` and `cut`.
pub fn split_move(t: &Template, line: &str, cut: usize) -> Result<Template, TemplateError> {
    t.ensure_valid()?;
    let b = line_of(t, line)?;
    let (ins, outs) = t.slot_lists();
    let o = outs[b].len();
    if o < 2 {
        return Err(TemplateError::BadSite(format!(
            "branch line `{line}` has a single outgoing slot"
        )));
    }
    if cut == 0 || cut >= o {
        return Err(TemplateError::BadSite(format!(
            "cut {cut} must lie strictly between 0 and {o}"
        )));
    }

    let strips = t.strips();
    let doubled: Vec<bool> = (0..strips.len())
        .map(|s| strips[s].target.line == b)
        .collect();
    let strip_taken = |name: &str| strips.iter().any(|s| s.id == name);
    // New strip list: each doubled strip r becomes (ra, rb) in place.
    let mut new_strips = Vec::new();
    let mut copies = vec![(usize::MAX, usize::MAX); strips.len()];
    let mut plain = vec![usize::MAX; strips.len()];
    for (s, strip) in strips.iter().enumerate() {
        if doubled[s] {
            let a = fresh_id(format!("{}a", strip.id), |n| {
                strip_taken(n) || new_strips.iter().any(|(m, _): &(String, i64)| m == n)
            });
            let c = fresh_id(format!("{}b", strip.id), |n| {
                strip_taken(n) || n == a || new_strips.iter().any(|(m, _): &(String, i64)| m == n)
            });
            copies[s] = (new_strips.len(), new_strips.len() + 1);
            new_strips.push((a, strip.half_twists));
            new_strips.push((c, strip.half_twists));
        } else {
            plain[s] = new_strips.len();
            new_strips.push((strip.id.clone(), strip.half_twists));
        }
    }
    let expand = |slots: &[usize]| -> Vec<usize> {
        let mut out = Vec::new();
        for &s in slots {
            if doubled[s] {
                let (a, c) = copies[s];
                if strips[s].is_twisted() {
                    out.extend([c, a]);
                } else {
                    out.extend([a, c]);
                }
            } else {
                out.push(plain[s]);
            }
        }
        out
    };

    let line_taken = |name: &str| t.lines().iter().any(|l| l.id == name && l.id != line);
    let first = fresh_id(format!("{line}a"), line_taken);
    let second = fresh_id(format!("{line}b"), |n| line_taken(n) || n == first);
    let mut line_ids = Vec::new();
    let mut new_ins = Vec::new();
    let mut new_outs = Vec::new();
    for (c, l) in t.lines().iter().enumerate() {
        if c == b {
            line_ids.push(first.clone());
            new_ins.push(ins[b].iter().map(|&s| copies[s].0).collect());
            new_outs.push(expand(&outs[b][..cut]));
            line_ids.push(second.clone());
            new_ins.push(ins[b].iter().map(|&s| copies[s].1).collect());
            new_outs.push(expand(&outs[b][cut..]));
        } else {
            line_ids.push(l.id.clone());
            new_ins.push(ins[c].iter().map(|&s| plain[s]).collect());
            new_outs.push(expand(&outs[c]));
        }
    }
    Ok(Template::from_slots(
        line_ids, &new_ins, &new_outs, new_strips,
    ))
}

/// Converse of [`split_move`]: merge `first` and `second` back into one line.
pub fn split_inverse(t: &Template, first: &str, second: &str) -> Result<Template, TemplateError> {
    t.ensure_valid()?;
    let b1 = line_of(t, first)?;
    let b2 = line_of(t, second)?;
    let bad = |reason: String| Err(TemplateError::BadSite(reason));
    if b1 == b2 {
        return bad(format!("cannot merge branch line `{first}` with itself"));
    }
    let (ins, outs) = t.slot_lists();
    if ins[b1].len() != ins[b2].len() {
        return bad(format!(
            "branch lines `{first}` and `{second}` have different numbers of incoming slots"
        ));
    }
    let strips = t.strips();
    // merged_into[s] = the first strip of the pair that s belongs to.
    let mut merged_into = vec![None; strips.len()];
    for (&r1, &r2) in ins[b1].iter().zip(&ins[b2]) {
        let (s1, s2) = (&strips[r1], &strips[r2]);
        if s1.source.line != s2.source.line || s1.half_twists != s2.half_twists {
            return bad(format!(
                "strips `{}` and `{}` do not come from one doubled strip",
                s1.id, s2.id
            ));
        }
        let (left, right) = if s1.is_twisted() { (s2, s1) } else { (s1, s2) };
        if left.source.index + 1 != right.source.index {
            return bad(format!(
                "strips `{}` and `{}` do not leave neighboring slots in order",
                s1.id, s2.id
            ));
        }
        merged_into[r1] = Some(r1);
        merged_into[r2] = Some(r1);
    }

    let strip_taken = |name: &str| {
        strips
            .iter()
            .enumerate()
            .any(|(s, strip)| strip.id == name && merged_into[s].is_none())
    };
    let mut new_index = vec![usize::MAX; strips.len()];
    let mut new_strips: Vec<(String, i64)> = Vec::new();
    for (s, strip) in strips.iter().enumerate() {
        match merged_into[s] {
            Some(r1) if r1 == s => {
                let r2 = ins[b2][ins[b1].iter().position(|&x| x == s).expect("paired")];
                let name = merged_name(&strip.id, &strips[r2].id, |n| {
                    strip_taken(n) || new_strips.iter().any(|(m, _)| m == n)
                });
                new_index[s] = new_strips.len();
                new_index[r2] = new_strips.len();
                new_strips.push((name, strip.half_twists));
            }
            Some(_) => {}
            None => {
                new_index[s] = new_strips.len();
                new_strips.push((strip.id.clone(), strip.half_twists));
            }
        }
    }
    let collapse = |slots: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &s in slots {
            let n = new_index[s];
            if merged_into[s].is_some() && out.last() == Some(&n) {
                continue;
            }
            out.push(n);
        }
        out
    };

    let line_taken = |name: &str| {
        t.lines()
            .iter()
            .enumerate()
            .any(|(c, l)| l.id == name && c != b1 && c != b2)
    };
    let merged_line = merged_name(first, second, line_taken);
    let mut line_ids = Vec::new();
    let mut new_ins = Vec::new();
    let mut new_outs = Vec::new();
    for (c, l) in t.lines().iter().enumerate() {
        if c == b2 {
            continue;
        }
        if c == b1 {
            line_ids.push(merged_line.clone());
            new_ins.push(ins[b1].iter().map(|&s| new_index[s]).collect());
            let joined: Vec<usize> = outs[b1].iter().chain(&outs[b2]).copied().collect();
            new_outs.push(collapse(&joined));
        } else {
            line_ids.push(l.id.clone());
            new_ins.push(ins[c].iter().map(|&s| new_index[s]).collect());
            new_outs.push(collapse(&outs[c]));
        }
    }
    let result = Template::from_slots(line_ids, &new_ins, &new_outs, new_strips);
    result.ensure_valid()?;
    Ok(result)
}

/// `xa` + `xb` merge back to `x` when that name is free; otherwise `first+second`.
fn merged_name(first: &str, second: &str, taken: impl Fn(&str) -> bool) -> String {
    if let (Some(p), Some(q)) = (first.strip_suffix('a'), second.strip_suffix('b')) {
        if p == q && !p.is_empty() && !taken(p) {
            return p.to_string();
        }
    }
    fresh_id(format!("{first}+{second}"), taken)
}
