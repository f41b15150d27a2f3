//! Read-only HTTP service over a filtered dataset: analysis, ad-hoc
//! inflection and the lexicon with its honorific links.

use std::collections::{BTreeSet, HashMap};
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Serialize;

use katsuyo::analyzer::{analyze_with_related, build_index, AnalysisIndex, AnalyzerError};
use katsuyo::generator::inflect;
use katsuyo::{parse_bundle, GeneratedEntry, Lexicon, RuleInventory};

pub const API_VERSION: &str = "1";

/// Everything a request needs; immutable once built.
pub struct AppState {
    index: AnalysisIndex,
    lexicon: Lexicon,
    rules: RuleInventory,
}

impl AppState {
    /// Builds the analysis index from `entries`; only kept entries are served.
    pub fn new(entries: &[GeneratedEntry], lexicon: Lexicon, rules: RuleInventory) -> Result<Self, AnalyzerError> {
        Ok(AppState {
            index: build_index(entries)?,
            lexicon,
            rules,
        })
    }

    pub fn forms(&self) -> usize {
        self.index.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiStatus {
    Ok,
    NotFound,
    Error,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiResponse<T: Serialize> {
    pub api_version: &'static str,
    pub status: ApiStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

type Reply = Response;

fn ok<T: Serialize>(payload: T) -> Reply {
    let body = ApiResponse {
        api_version: API_VERSION,
        status: ApiStatus::Ok,
        payload: Some(payload),
        message: None,
    };
    (StatusCode::OK, Json(body)).into_response()
}

fn failure(status: ApiStatus, message: impl Into<String>) -> Reply {
    let code = match status {
        ApiStatus::NotFound => StatusCode::NOT_FOUND,
        _ => StatusCode::BAD_REQUEST,
    };
    let body: ApiResponse<()> = ApiResponse {
        api_version: API_VERSION,
        status,
        payload: None,
        message: Some(message.into()),
    };
    (code, Json(body)).into_response()
}

#[derive(Debug, Serialize)]
pub struct RelatedPayload {
    pub form: String,
    pub lemma: String,
    pub labels: String,
    pub confidence: u8,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReadingPayload {
    pub lemma: String,
    pub labels: String,
    pub rule_id: String,
    pub confidence: u8,
    pub related: Vec<RelatedPayload>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzePayload {
    pub form: String,
    pub readings: Vec<ReadingPayload>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InflectedForm {
    pub form: String,
    pub lemma: String,
    pub labels: String,
    pub rule_id: String,
    /// Whether the form survived frequency filtering.
    pub attested: bool,
}

#[derive(Debug, Serialize)]
pub struct InflectPayload {
    pub lemma: String,
    pub features: String,
    pub forms: Vec<InflectedForm>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerbPayload {
    pub lemma: String,
    pub romanization: String,
    pub gloss: String,
    pub class: String,
    pub politeness_type: String,
    pub basic_sources: Vec<String>,
    pub respectful: Vec<String>,
    pub humble: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct VerbsPayload {
    pub count: usize,
    pub verbs: Vec<VerbPayload>,
}

fn param<'a>(q: &'a HashMap<String, String>, name: &str) -> Option<&'a str> {
    q.get(name).map(|s| s.trim()).filter(|s| !s.is_empty())
}

async fn analyze_handler(State(state): State<Arc<AppState>>, Query(q): Query<HashMap<String, String>>) -> Reply {
    let Some(form) = param(&q, "form") else {
        return failure(ApiStatus::Error, "missing query parameter: form");
    };
    let result = analyze_with_related(&state.index, form, &state.lexicon);
    if !result.is_found() {
        return failure(ApiStatus::NotFound, format!("no readings for {form}"));
    }
    let readings = result
        .readings
        .into_iter()
        .zip(result.related)
        .map(|(r, related)| ReadingPayload {
            lemma: r.lemma,
            labels: r.bundle.to_string(),
            rule_id: r.rule_id,
            confidence: r.confidence,
            related: related
                .into_iter()
                .map(|x| RelatedPayload {
                    form: x.form,
                    lemma: x.lemma,
                    labels: x.bundle.to_string(),
                    confidence: x.confidence,
                })
                .collect(),
        })
        .collect();
    ok(AnalyzePayload {
        form: result.form,
        readings,
    })
}

async fn inflect_handler(State(state): State<Arc<AppState>>, Query(q): Query<HashMap<String, String>>) -> Reply {
    let (Some(lemma), Some(features)) = (param(&q, "lemma"), param(&q, "features")) else {
        return failure(ApiStatus::Error, "query parameters lemma and features are required");
    };
    let bundle = match parse_bundle(features) {
        Ok(b) => b,
        Err(e) => return failure(ApiStatus::Error, e.to_string()),
    };
    let Ok(linked) = state.lexicon.linked_lemmas(lemma) else {
        return failure(ApiStatus::NotFound, format!("{lemma} is not in the lexicon"));
    };
    let mut forms = Vec::new();
    for candidate in std::iter::once(lemma.to_string()).chain(linked) {
        let Some(verb) = state.lexicon.get(&candidate) else {
            continue;
        };
        let produced = match inflect(&verb.lemma, verb.class, verb.politeness_type, bundle, &state.rules) {
            Ok(p) => p,
            Err(e) => return failure(ApiStatus::Error, e.to_string()),
        };
        for (form, rule_id) in produced {
            let attested = state.index.forms_for(&verb.lemma, bundle).contains(&form);
            forms.push(InflectedForm {
                form,
                lemma: verb.lemma.clone(),
                labels: bundle.to_string(),
                rule_id,
                attested,
            });
        }
    }
    if forms.is_empty() {
        return failure(ApiStatus::NotFound, format!("no rule produces {bundle} for {lemma}"));
    }
    ok(InflectPayload {
        lemma: lemma.to_string(),
        features: bundle.to_string(),
        forms,
    })
}

async fn verbs_handler(State(state): State<Arc<AppState>>) -> Reply {
    let lex = &state.lexicon;
    let verbs: Vec<VerbPayload> = lex
        .entries()
        .iter()
        .map(|v| {
            let eq = lex.honorific_equivalents(&v.lemma).unwrap_or_default();
            let list = |s: BTreeSet<String>| s.into_iter().collect::<Vec<_>>();
            VerbPayload {
                lemma: v.lemma.clone(),
                romanization: v.romanization.clone(),
                gloss: v.gloss.clone(),
                class: v.class.to_string(),
                politeness_type: v.politeness_type.to_string(),
                basic_sources: v.basic_sources.to_vec(),
                respectful: list(eq.respectful),
                humble: list(eq.humble),
            }
        })
        .collect();
    ok(VerbsPayload {
        count: verbs.len(),
        verbs,
    })
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

async fn cors(mut res: Response) -> Response {
    let h = res.headers_mut();
    h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    h.insert(
        header::ACCESS_CONTROL_ALLOW_METHODS,
        HeaderValue::from_static("GET, OPTIONS"),
    );
    h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static("*"));
    res
}

pub fn app(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/analyze", get(analyze_handler).options(preflight))
        .route("/inflect", get(inflect_handler).options(preflight))
        .route("/verbs", get(verbs_handler).options(preflight))
        .layer(axum::middleware::map_response(cors))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("serving {} forms on http://{}", state.forms(), listener.local_addr()?);
    axum::serve(listener, app(state)).await
}
