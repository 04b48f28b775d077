use oddcluster::colouring::ColourOptions;

/// Resource caps. Parsed from `N` (search cap only) or `key=value,...` with
/// keys `search`, `treewidth` and `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub search: usize,
    pub treewidth: usize,
    pub depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        let o = ColourOptions::default();
        Caps {
            search: o.search_cap,
            treewidth: o.exact_treewidth_cap,
            depth: o.tree_depth_cap,
        }
    }
}

impl Caps {
    pub fn parse(text: &str) -> Result<Caps, String> {
        let mut caps = Caps::default();
        let text = text.trim();
        if text.is_empty() {
            return Ok(caps);
        }
        if let Ok(n) = text.parse() {
            caps.search = n;
            return Ok(caps);
        }
        for part in text.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("cap {key:?} needs a non-negative integer, got {value:?}"))?;
            match key.trim() {
                "search" => caps.search = value,
                "treewidth" => caps.treewidth = value,
                "depth" => caps.depth = value,
                other => return Err(format!("unknown cap {other:?} (search, treewidth, depth)")),
            }
        }
        Ok(caps)
    }

    pub fn colour_options(&self) -> ColourOptions {
        ColourOptions {
            search_cap: self.search,
            exact_treewidth_cap: self.treewidth,
            tree_depth_cap: self.depth,
        }
    }
}
