//! Fit a vocabulary, then embed sentences with TF-IDF and averaged PPMI rows.

use strel::featurize::{fit_ppmi, TfidfModel};
use strel::pairsim::cosine;
use strel::tokenize::{fit_vocab, tokenize};

fn main() -> strel::Result<()> {
    let docs = [
        "The cat sat on the mat.",
        "A cat lay on a mat!",
        "Stock prices fell sharply today.",
        "Prices of stocks dropped today.",
    ];
    let corpus: Vec<Vec<String>> = docs.iter().map(|d| tokenize(d)).collect();
    let vocab = fit_vocab(&corpus, 1)?;
    println!("{} terms over {} documents", vocab.len(), vocab.n_docs());

    let tfidf = TfidfModel::new(vocab.clone())?;
    for term in ["cat", "the", "today"] {
        let i = vocab.index_of(term).unwrap();
        println!(
            "  idf({term}) = {:.4} (df {})",
            tfidf.idf()[i],
            vocab.doc_freq_at(i)
        );
    }
    let v: Vec<Vec<f64>> = docs.iter().map(|d| tfidf.transform(d)).collect();
    println!(
        "tfidf cos(0,1) = {:.4}, cos(0,2) = {:.4}",
        cosine(&v[0], &v[1])?,
        cosine(&v[0], &v[2])?
    );

    let ppmi = fit_ppmi(&corpus, &vocab, 2)?;
    println!(
        "ppmi(cat, sat) = {:.4}, ppmi(cat, prices) = {:.4}",
        ppmi.value("cat", "sat"),
        ppmi.value("cat", "prices")
    );
    let p: Vec<Vec<f64>> = corpus.iter().map(|t| ppmi.sentence_vector(t)).collect();
    println!(
        "ppmi  cos(0,1) = {:.4}, cos(0,2) = {:.4}",
        cosine(&p[0], &p[1])?,
        cosine(&p[0], &p[2])?
    );
    Ok(())
}
