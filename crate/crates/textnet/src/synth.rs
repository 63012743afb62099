//! Seeded generator of synthetic tourism chatter.
//!
//! Documents mimic short social-media posts about Indonesian destinations:
//! a destination named by a multi-word phrase, an activity tied to it, filler
//! words, a Zipf-distributed background vocabulary, hashtags, mentions,
//! links, reposted duplicates and promotional spam. The same seed always
//! yields the same corpus.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use textnet_core::RawDocument;

/// A destination and the words people post about it.
struct Topic {
    /// Surface forms, the first being the canonical phrase.
    names: &'static [&'static str],
    canonical: &'static str,
    activity: &'static str,
    related: &'static [&'static str],
    /// Relative share of topical posts.
    weight: u32,
}

const TOPICS: &[Topic] = &[
    Topic {
        names: &["candi borobudur", "borobudur"],
        canonical: "borobudur",
        activity: "kuliner",
        related: &["magelang", "stupa", "relief"],
        weight: 16,
    },
    Topic {
        names: &["gunung bromo", "bromo"],
        canonical: "bromo",
        activity: "sunrise",
        related: &["jeep", "kawah", "pasir"],
        weight: 12,
    },
    Topic {
        names: &["kepulauan seribu", "pulau seribu"],
        canonical: "seribu",
        activity: "berlayar",
        related: &["snorkeling", "kapal", "jakarta"],
        weight: 12,
    },
    Topic {
        names: &["danau toba", "toba"],
        canonical: "toba",
        activity: "dayung",
        related: &["samosir", "batak", "danau"],
        weight: 11,
    },
    Topic {
        names: &["wakatobi"],
        canonical: "wakatobi",
        activity: "pelabuhan",
        related: &["diving", "karang", "sulawesi"],
        weight: 11,
    },
    Topic {
        names: &["mandalika"],
        canonical: "mandalika",
        activity: "homestay",
        related: &["lombok", "sirkuit", "kuta"],
        weight: 10,
    },
    Topic {
        names: &["labuan bajo", "bajo"],
        canonical: "bajo",
        activity: "keindahan",
        related: &["komodo", "padar", "sunset"],
        weight: 10,
    },
    Topic {
        names: &["pulau morotai", "morotai"],
        canonical: "morotai",
        activity: "murah",
        related: &["maluku", "sejarah", "tiket"],
        weight: 8,
    },
    Topic {
        names: &["tanjung lesung"],
        canonical: "lesung",
        activity: "foto",
        related: &["banten", "resort", "ombak"],
        weight: 7,
    },
    Topic {
        names: &["tanjung kelayang"],
        canonical: "kelayang",
        activity: "pantai",
        related: &["belitung", "batu", "granit"],
        weight: 6,
    },
    Topic {
        names: &["museum angkut"],
        canonical: "museum_angkut",
        activity: "foto",
        related: &["malang", "mobil", "antik"],
        weight: 9,
    },
    Topic {
        names: &["museum nasional"],
        canonical: "museum_nasional",
        activity: "museum_gajah",
        related: &["arca", "prasasti", "jakarta"],
        weight: 6,
    },
    Topic {
        names: &["museum tekstil"],
        canonical: "museum_tekstil",
        activity: "batik",
        related: &["kain", "tenun", "pameran"],
        weight: 4,
    },
    Topic {
        names: &["museum sangiran"],
        canonical: "museum_sangiran",
        activity: "purba",
        related: &["fosil", "manusia", "sragen"],
        weight: 4,
    },
];

/// Extra phrase the `museum_nasional` activity is written as.
const EXTRA_PHRASES: &[(&str, &str)] = &[("museum gajah", "museum_gajah")];

const FILLERS: &[&str] = &[
    "yang", "di", "ke", "dan", "ini", "itu", "banget", "sangat", "lagi", "sama", "aku", "kita",
    "mau", "udah", "jadi", "the", "and", "so", "with", "buat", "dari", "pagi", "akhirnya",
];

const OPENERS: &[&str] = &[
    "liburan ke",
    "akhirnya sampai di",
    "rekomendasi",
    "seru banget di",
    "pengen balik ke",
    "weekend di",
    "trip ke",
    "view terbaik di",
    "jalan jalan ke",
    "kangen",
    "wajib ke",
    "otw",
    "mudik lewat",
    "cuti ke",
    "healing di",
    "throwback",
];

const SPAM: &[&str] = &[
    "PROMO paket wisata {} murah meriah, DISKON 50%! hubungi admin",
    "diskon tiket {} hari ini saja, promo terbatas!!!",
    "Jual paket tour {} promo akhir tahun, info & booking DM",
];

const SYLLABLES: &[&str] = &[
    "ba", "ka", "la", "ma", "na", "pa", "ra", "sa", "ta", "wa", "ja", "da", "bu", "ku", "lu", "mu",
    "ri", "si", "ti", "go", "ko", "ne", "se", "te",
];

/// Background word number `i`, a pronounceable string unique per index.
pub fn background_word(i: usize) -> String {
    let n = SYLLABLES.len();
    let mut word = String::from("x");
    let mut rest = i;
    loop {
        word.push_str(SYLLABLES[rest % n]);
        rest /= n;
        if rest == 0 {
            break;
        }
    }
    word
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub n_docs: usize,
    /// Size of the background vocabulary.
    pub vocab_size: usize,
    /// Zipf exponent of the background vocabulary.
    pub zipf_exponent: f64,
    pub seed: u64,
    /// Share of posts about a topic; the remainder is background chatter.
    pub topical_rate: f64,
    pub spam_rate: f64,
    pub duplicate_rate: f64,
}

impl SynthConfig {
    pub fn new(n_docs: usize, vocab_size: usize, seed: u64) -> Self {
        SynthConfig {
            n_docs,
            vocab_size,
            zipf_exponent: 1.07,
            seed,
            topical_rate: 0.75,
            spam_rate: 0.06,
            duplicate_rate: 0.05,
        }
    }
}

/// Phrase dictionary matching the generated destination names, in the
/// `surface<TAB>canonical` file format.
pub fn phrase_file() -> String {
    let mut out = String::from("# destination names merged into single tokens\n");
    for t in TOPICS {
        for name in t.names.iter().filter(|n| n.contains(' ')) {
            out.push_str(&format!("{name}\t{}\n", t.canonical));
        }
    }
    for (surface, canonical) in EXTRA_PHRASES {
        out.push_str(&format!("{surface}\t{canonical}\n"));
    }
    out
}

struct Generator {
    rng: ChaCha8Rng,
    zipf: Zipf<f64>,
    topic_total: u32,
    config: SynthConfig,
}

impl Generator {
    fn background(&mut self) -> String {
        let rank = self.zipf.sample(&mut self.rng) as usize;
        background_word(rank - 1)
    }

    fn topic(&mut self) -> &'static Topic {
        let mut pick = self.rng.random_range(0..self.topic_total);
        for t in TOPICS {
            if pick < t.weight {
                return t;
            }
            pick -= t.weight;
        }
        unreachable!("pick is below the weight total")
    }

    fn filler(&mut self) -> &'static str {
        FILLERS
            .choose(&mut self.rng)
            .expect("fillers are not empty")
    }

    fn activity_surface(activity: &str) -> String {
        EXTRA_PHRASES
            .iter()
            .find(|(_, c)| *c == activity)
            .map_or_else(|| activity.to_string(), |(s, _)| s.to_string())
    }

    fn destination(&mut self, t: &Topic) -> String {
        let name = *t.names.choose(&mut self.rng).expect("topic has names");
        match self.rng.random_range(0..10) {
            0 => format!("#{}", name.replace(' ', "")),
            1 => name.to_uppercase(),
            2 => capitalize(name),
            _ => name.to_string(),
        }
    }

    fn decorate(&mut self, words: &mut Vec<String>) {
        if self.rng.random_bool(0.2) {
            let user = format!(
                "@{}_{}",
                background_word(self.rng.random_range(0..500)),
                self.rng.random_range(1..99)
            );
            let at = self.rng.random_range(0..=words.len());
            words.insert(at, user);
        }
        if self.rng.random_bool(0.15) {
            let w = self.background();
            words.push(format!("#{w}"));
        }
        if self.rng.random_bool(0.15) {
            words.push(format!("https://t.co/{:x}", self.rng.random::<u32>()));
        }
    }

    fn topical(&mut self) -> String {
        let t = self.topic();
        let mut words: Vec<String> = Vec::new();
        if self.rng.random_bool(0.35) {
            let opener = *OPENERS
                .choose(&mut self.rng)
                .expect("openers are not empty");
            words.push(opener.to_string());
        }
        words.push(self.destination(t));
        let mut extra: Vec<String> = Vec::new();
        if self.rng.random_bool(0.55) {
            extra.push(Self::activity_surface(t.activity));
        }
        for r in t.related {
            if self.rng.random_bool(0.2) {
                extra.push(r.to_string());
            }
        }
        for _ in 0..self.rng.random_range(1..6) {
            if self.rng.random_bool(0.6) {
                extra.push(self.filler().to_string());
            } else {
                let w = self.background();
                extra.push(w);
            }
        }
        extra.shuffle(&mut self.rng);
        words.extend(extra);
        self.decorate(&mut words);
        words.join(" ")
    }

    fn chatter(&mut self) -> String {
        let mut words: Vec<String> = Vec::new();
        for _ in 0..self.rng.random_range(3..10) {
            if self.rng.random_bool(0.35) {
                words.push(self.filler().to_string());
            } else {
                let w = self.background();
                words.push(w);
            }
        }
        self.decorate(&mut words);
        words.join(" ")
    }

    fn spam(&mut self) -> String {
        let t = self.topic();
        let template = *SPAM
            .choose(&mut self.rng)
            .expect("spam templates are not empty");
        let mut text = template.replace("{}", t.names[0]);
        text.push_str(&format!(
            " wa.me/62{}",
            self.rng.random_range(100_000_000u64..999_999_999)
        ));
        text
    }

    fn timestamp(&mut self) -> String {
        format!(
            "2017-{:02}-{:02}T{:02}:{:02}:{:02}Z",
            self.rng.random_range(1..=12),
            self.rng.random_range(1..=28),
            self.rng.random_range(0..24),
            self.rng.random_range(0..60),
            self.rng.random_range(0..60)
        )
    }
}

fn capitalize(s: &str) -> String {
    s.split(' ')
        .map(|w| {
            let mut c = w.chars();
            c.next()
                .map_or_else(String::new, |f| f.to_uppercase().chain(c).collect())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Generates `config.n_docs` documents with ids `d000001`, `d000002`, ...
pub fn generate(config: &SynthConfig) -> Vec<RawDocument> {
    assert!(config.vocab_size > 0, "vocabulary must not be empty");
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        zipf: Zipf::new(config.vocab_size as f64, config.zipf_exponent)
            .expect("valid Zipf parameters"),
        topic_total: TOPICS.iter().map(|t| t.weight).sum(),
        config: config.clone(),
    };
    let mut docs: Vec<RawDocument> = Vec::with_capacity(config.n_docs);
    for i in 0..config.n_docs {
        let roll: f64 = g.rng.random();
        let text = if !docs.is_empty() && roll < g.config.duplicate_rate {
            let j = g.rng.random_range(0..docs.len());
            let original = docs[j].text.clone();
            if g.rng.random_bool(0.5) {
                original
            } else {
                format!(
                    "RT @{}: {original}",
                    background_word(g.rng.random_range(0..500))
                )
            }
        } else if roll < g.config.duplicate_rate + g.config.spam_rate {
            g.spam()
        } else if roll < g.config.duplicate_rate + g.config.spam_rate + g.config.topical_rate {
            g.topical()
        } else {
            g.chatter()
        };
        let mut doc = RawDocument::new(format!("d{:06}", i + 1), text);
        doc.created_at = Some(g.timestamp());
        if g.rng.random_bool(0.1) {
            doc.tags = vec!["tourism".to_string()];
        }
        docs.push(doc);
    }
    docs
}
