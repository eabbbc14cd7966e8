/*
 * C interface to the hybrid retriever.
 *
 * All functions return an rtv_status. On failure a description is available
 * from rtv_last_error() on the same thread until the next call into the
 * library. Strings returned through char** out-parameters are owned by the
 * caller and must be released with rtv_string_free().
 */
#ifndef RETRIEVER_RETRIEVER_H
#define RETRIEVER_RETRIEVER_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  define RTV_API __declspec(dllexport)
#else
#  define RTV_API __attribute__((visibility("default")))
#endif

/* Values match retriever::ErrorCode. */
typedef enum rtv_status {
  RTV_OK = 0,
  RTV_ERR_INVALID_ARGUMENT = 1,
  RTV_ERR_IO = 2,
  RTV_ERR_PARSE = 3,
  RTV_ERR_FORMAT = 4,
  RTV_ERR_DUPLICATE_ENTRY = 5,
  RTV_ERR_UNKNOWN_COUNTRY = 6,
  RTV_ERR_MANIFEST_EMPTY = 7,
  RTV_ERR_NO_HEADINGS = 8,
  RTV_ERR_INGEST = 9,
  RTV_ERR_DUPLICATE_WORD = 10,
  RTV_ERR_DIMENSION = 11,
  RTV_ERR_DUPLICATE_DOC = 12,
  RTV_ERR_EMPTY_CORPUS = 13,
  RTV_ERR_UNKNOWN_DOC = 14,
  RTV_ERR_RANK_MISMATCH = 15,
  RTV_ERR_EMPTY_QUERY = 16,
  RTV_ERR_EMPTY_EVAL = 17,
  RTV_ERR_NO_INDEX = 18,
  RTV_ERR_BUSY = 19,
  RTV_ERR_INTERNAL = 20
} rtv_status;

typedef enum rtv_mode {
  RTV_MODE_HYBRID = 0,
  RTV_MODE_BM25 = 1,
  RTV_MODE_EMBEDDING = 2
} rtv_mode;

/* Bit flags selecting modes for rtv_engine_evaluate. */
#define RTV_EVAL_BM25 (1u << 0)
#define RTV_EVAL_EMBEDDING (1u << 1)
#define RTV_EVAL_HYBRID (1u << 2)
#define RTV_EVAL_ALL (RTV_EVAL_BM25 | RTV_EVAL_EMBEDDING | RTV_EVAL_HYBRID)

typedef struct rtv_engine rtv_engine;
typedef struct rtv_server rtv_server;

typedef struct rtv_ingest_options {
  const char* manifest;
  const char* embeddings;
  const char* lexicon;
  const char* stopwords;
  const char* gazetteer;
  const char* out_index;
} rtv_ingest_options;

RTV_API const char* rtv_last_error(void);
/* Stable machine-readable name, e.g. "empty_query". */
RTV_API const char* rtv_status_name(rtv_status status);
RTV_API void rtv_string_free(char* s);

/* Builds a corpus and writes the index file. If out_index already exists its
 * version is carried forward and incremented. report_json (nullable) receives
 * {"documents": N, "version": V, "index": path}. */
RTV_API rtv_status rtv_ingest(const rtv_ingest_options* options, char** report_json);

/* config_path may be NULL, in which case RETRIEVER_CONFIG is consulted. Resource
 * paths from the config take precedence over those recorded in the index. */
RTV_API rtv_status rtv_engine_open(const char* index_path, const char* config_path,
                                   rtv_engine** out);
RTV_API void rtv_engine_free(rtv_engine* engine);

/* {"results": [...], "detected_countries": [...], "mode": ..., "version": V} */
RTV_API rtv_status rtv_engine_query(const rtv_engine* engine, const char* text,
                                    rtv_mode mode, int top_k, char** out_json);

RTV_API rtv_status rtv_engine_document_count(const rtv_engine* engine,
                                             unsigned long* out_count);

/* mode_mask is a combination of RTV_EVAL_* flags. Either output may be NULL. */
RTV_API rtv_status rtv_engine_evaluate(const rtv_engine* engine, const char* pairs_path,
                                       unsigned mode_mask, char** out_json,
                                       char** out_table);

/* Creates a server. index_path may be NULL (start empty, fill via reindex);
 * resources then come from the config. */
RTV_API rtv_status rtv_server_create(const char* index_path, const char* config_path,
                                     rtv_server** out);
/* host NULL uses the config host; port < 0 uses the config port; port 0 picks a
 * free port. The bound port is written to out_port (nullable). */
RTV_API rtv_status rtv_server_bind(rtv_server* server, const char* host, int port,
                                   int* out_port);
/* Blocks until rtv_server_stop is called from another thread. */
RTV_API rtv_status rtv_server_run(rtv_server* server);
RTV_API void rtv_server_stop(rtv_server* server);
RTV_API void rtv_server_free(rtv_server* server);

#ifdef __cplusplus
}
#endif

#endif /* RETRIEVER_RETRIEVER_H */
