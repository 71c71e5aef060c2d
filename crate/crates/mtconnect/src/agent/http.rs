use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;

use super::{Agent, DEFAULT_SAMPLE_COUNT};
use crate::error::AgentError;

pub(super) fn router(agent: Arc<Agent>) -> Router {
    Router::new()
        .route("/probe", get(probe))
        .route("/current", get(current))
        .route("/sample", get(sample))
        .with_state(agent)
}

fn xml(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "text/xml; charset=utf-8")], body).into_response()
}

fn respond(agent: &Agent, result: Result<String, AgentError>) -> Response {
    match result {
        Ok(body) => xml(StatusCode::OK, body),
        Err(e) => {
            let status = match e {
                AgentError::OutOfRange { .. } => StatusCode::NOT_FOUND,
                AgentError::InvalidRequest(_) => StatusCode::BAD_REQUEST,
            };
            xml(status, agent.error_xml(&e))
        }
    }
}

fn param(q: &HashMap<String, String>, name: &str) -> Result<Option<u64>, AgentError> {
    q.get(name)
        .map(|v| {
            v.parse::<u64>()
                .map_err(|_| AgentError::InvalidRequest(format!("'{name}' must be a non-negative integer, got '{v}'")))
        })
        .transpose()
}

async fn probe(State(agent): State<Arc<Agent>>) -> Response {
    xml(StatusCode::OK, agent.probe_xml())
}

async fn current(State(agent): State<Arc<Agent>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let result = param(&q, "at").and_then(|at| agent.current_xml(at));
    respond(&agent, result)
}

async fn sample(State(agent): State<Arc<Agent>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let result = param(&q, "from").and_then(|from| {
        let count = param(&q, "count")?.unwrap_or(DEFAULT_SAMPLE_COUNT);
        agent.sample_xml(from, count)
    });
    respond(&agent, result)
}
