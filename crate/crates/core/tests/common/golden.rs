//! Transcribed D4 `S_2` trace.

use qtchar_core::Vertex;

pub struct Entry {
    pub step: usize,
    pub vertex: Vertex,
    pub pass: usize,
    pub degree: String,
    pub frozen: String,
    pub z: String,
    pub y: String,
}

fn parse_vertex(s: &str) -> Vertex {
    let t = s.trim_matches(|c| c == '(' || c == ')');
    let (a, b) = t.split_once(',').unwrap();
    Vertex::new(a.parse().unwrap(), b.parse().unwrap())
}

pub fn load() -> Vec<Entry> {
    let text = include_str!("../data/d4_node2_trace.txt");
    let mut out = Vec::new();
    for block in text.split("\n\n").filter(|b| !b.trim().is_empty()) {
        let mut lines = block.lines().filter(|l| !l.starts_with('#'));
        let head: Vec<&str> = lines.next().unwrap().trim_matches(|c| c == '[' || c == ']').split(' ').collect();
        let mut e = Entry {
            step: head[1].parse().unwrap(),
            vertex: parse_vertex(head[3]),
            pass: head[5].parse().unwrap(),
            degree: String::new(),
            frozen: String::new(),
            z: String::new(),
            y: String::new(),
        };
        for l in lines {
            let (key, val) = l.split_once(' ').unwrap();
            let val = val.to_string();
            match key {
                "degree" => e.degree = val,
                "frozen" => e.frozen = val,
                "z" => e.z = val,
                "Y" => e.y = val,
                _ => panic!("unknown key {key}"),
            }
        }
        out.push(e);
    }
    out
}
