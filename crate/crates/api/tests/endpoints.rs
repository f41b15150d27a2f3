use std::path::Path;
use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use katsuyo::frequency::{filter_entries, HitCache};
use katsuyo::{generate_all, ExclusionList, Lexicon, RuleInventory};
use katsuyo_api::{app, AppState};

fn state() -> Arc<AppState> {
    static STATE: OnceLock<Arc<AppState>> = OnceLock::new();
    STATE
        .get_or_init(|| {
            let (lex, inv) = (Lexicon::shipped(), RuleInventory::shipped());
            let entries = generate_all(&lex, &inv, &ExclusionList::shipped()).unwrap();
            let hits = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/hits.tsv");
            let outcome = filter_entries(entries, &HitCache::load(hits).unwrap(), 10).unwrap();
            Arc::new(AppState::new(&outcome.kept, lex, inv).unwrap())
        })
        .clone()
}

async fn get(uri: &str) -> (StatusCode, Value, Option<String>) {
    let res = app(state())
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = res.status();
    let cors = res
        .headers()
        .get("access-control-allow-origin")
        .map(|v| v.to_str().unwrap().to_string());
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap(), cors)
}

fn encode(s: &str) -> String {
    s.bytes()
        .map(|b| {
            if b.is_ascii_alphanumeric() {
                (b as char).to_string()
            } else {
                format!("%{b:02X}")
            }
        })
        .collect()
}

#[tokio::test]
async fn analyze_syncretic_form() {
    let (status, body, cors) = get(&format!("/analyze?form={}", encode("見られる"))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(cors.as_deref(), Some("*"));
    assert_eq!(body["apiVersion"], "1");
    assert_eq!(body["status"], "ok");
    let readings = body["payload"]["readings"].as_array().unwrap();
    let labels: Vec<&str> = readings.iter().map(|r| r["labels"].as_str().unwrap()).collect();
    assert_eq!(labels.len(), 3, "{labels:?}");
    for expected in ["V;PRS;IPFV;PASS", "V;PRS;IPFV;POT", "V;ELEV;PRS;IPFV"] {
        assert!(labels.contains(&expected), "{labels:?}");
    }
    for r in readings {
        assert_eq!(r["lemma"], "見る");
        assert!(!r["related"].as_array().unwrap().is_empty());
    }
}

#[tokio::test]
async fn analyze_errors() {
    let (status, body, _) = get("/analyze?form=zzz").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["status"], "not_found");
    assert!(body["message"].is_string());
    assert!(body.get("payload").is_none());

    let (status, body, _) = get("/analyze").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["status"], "error");
}

#[tokio::test]
async fn inflect_includes_humble_equivalents() {
    let uri = format!(
        "/inflect?lemma={}&features={}",
        encode("行く"),
        encode("V;FORM;HUMB;PRS;IPFV")
    );
    let (status, body, _) = get(&uri).await;
    assert_eq!(status, StatusCode::OK);
    let forms: Vec<&str> = body["payload"]["forms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["form"].as_str().unwrap())
        .collect();
    assert!(forms.contains(&"伺う"), "{forms:?}");
    assert!(forms.contains(&"まいる"), "{forms:?}");
    assert_eq!(body["payload"]["features"], "V;FORM;HUMB;PRS;IPFV");
}

#[tokio::test]
async fn inflect_errors() {
    let (status, body, _) = get(&format!("/inflect?lemma={}&features=V", encode("踊る"))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["status"], "not_found");

    let (status, _, _) = get(&format!(
        "/inflect?lemma={}&features={}",
        encode("書く"),
        encode("V;BOGUS")
    ))
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, _, _) = get(&format!("/inflect?lemma={}", encode("書く"))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn verbs_listing_has_links() {
    let (status, body, _) = get("/verbs").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["payload"]["count"], 147);
    let verbs = body["payload"]["verbs"].as_array().unwrap();
    assert_eq!(verbs.len(), 147);
    let taberu = verbs.iter().find(|v| v["lemma"] == "食べる").unwrap();
    assert!(taberu["respectful"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x == "召し上がる"));
}

#[tokio::test]
async fn identical_requests_identical_responses() {
    let uri = format!("/analyze?form={}", encode("書かない"));
    assert_eq!(get(&uri).await.1, get(&uri).await.1);
}

#[tokio::test]
async fn preflight_is_allowed() {
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/verbs")
        .body(Body::empty())
        .unwrap();
    let res = app(state()).oneshot(req).await.unwrap();
    assert_eq!(res.status(), StatusCode::NO_CONTENT);
    assert_eq!(res.headers()["access-control-allow-origin"], "*");
}
